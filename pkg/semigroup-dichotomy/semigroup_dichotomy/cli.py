"""
Command-line front end.

Exit status is 0 on success, 1 when a checked bound is violated and 2 on
usage errors, malformed input files, unwritable outputs and numerical errors.
Every violation record is also written to stderr as one JSON line, whatever
the output format.
"""

import argparse
import asyncio
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .commands import (
    BmCommand,
    CommandCollection,
    CommandFailure,
    ConvolutionCommand,
    CounterexampleCommand,
    DsumCommand,
    GrowthCommand,
    HyperbolicityCommand,
    KrivineCommand,
    LaplaceCommand,
    MinkowskiCommand,
    ShiftCommand,
)
from .commands.base import OutputFormat
from .commands.run import DEFAULT_TIMEOUT
from .errors import FormatError
from .formats import dumps_line, load_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _numbers(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from e


def _pair(text: str) -> list[float]:
    values = _numbers(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return values


def _axis(text: str) -> list[float]:
    values = _numbers(text)
    if len(values) != 3 or not values[2].is_integer():
        raise argparse.ArgumentTypeError(f"expected MIN,MAX,COUNT, got {text!r}")
    return [values[0], values[1], int(values[2])]


@dataclass(kw_only=True, frozen=True)
class RunConfig:
    """One CLI invocation: the subcommand, its input document and the output settings."""

    subcommand: str
    command_input: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_format: OutputFormat = "json"
    out: Path | None = None
    tol_report: bool = False
    log_level: str = "WARNING"
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        output_dir = Path(os.getenv("DICHOTOMY_OUTPUT_DIR", "."))
        out = None
        if args.out is not None:
            out = args.out if args.out.is_absolute() else output_dir / args.out
        fmt = args.format or ("csv" if out is not None and out.suffix == ".csv" else "json")
        command_input: dict[str, Any] = {"seed": args.seed, "output_format": fmt, "tol_report": args.tol_report}
        for key in ARGUMENT_KEYS:
            value = getattr(args, key, None)
            if value is not None:
                command_input[key] = value
        for key in ("matrix", "step"):
            path = getattr(args, key, None)
            if path is not None:
                command_input[key] = load_json(path)
        return cls(
            subcommand=args.subcommand,
            command_input=command_input,
            seed=args.seed,
            output_format=fmt,
            out=out,
            tol_report=args.tol_report,
            log_level=args.log_level,
            timeout=args.timeout,
        )


# argparse destinations passed through to the command input unchanged
ARGUMENT_KEYS = (
    "m",
    "m_max",
    "radius",
    "points",
    "lambdas",
    "re_axis",
    "im_axis",
    "times",
    "trials",
    "lam",
    "g",
    "steps",
    "p",
    "horizon",
    "n_modes",
    "families",
    "t_max",
    "samples",
)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=0, help="seed recorded in the output (default 0)")
    shared.add_argument("--format", choices=["csv", "json"], help="output format (default: csv for --out *.csv, else json)")
    shared.add_argument("--out", type=Path, help="output file; relative paths resolve against $DICHOTOMY_OUTPUT_DIR")
    shared.add_argument("--tol-report", action="store_true", help="include upper bounds and tolerance details")
    shared.add_argument(
        "--log-level",
        default=os.getenv("DICHOTOMY_LOG_LEVEL", "WARNING"),
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
    )
    shared.add_argument(
        "--timeout", type=float, default=float(os.getenv("DICHOTOMY_TIMEOUT", DEFAULT_TIMEOUT)), help="seconds"
    )

    parser = argparse.ArgumentParser(
        prog="semigroup-dichotomy",
        description="Resolvent and semigroup norms of a positive semigroup without spectral dichotomy.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    shift = sub.add_parser("shift", parents=[shared], help="resolvent of the shift block C_M")
    shift.add_argument("--m", type=int, required=True)
    shift.add_argument("--radius", type=float)
    shift.add_argument("--points", type=int)

    bm = sub.add_parser("bm", parents=[shared], help="resolvent and semigroup norms of B_M")
    bm.add_argument("--m", type=int, required=True)
    bm.add_argument("--lam", dest="lambdas", type=_pair, action="append", metavar="RE,IM")
    bm.add_argument("--times", type=_numbers, metavar="T1,T2,...")

    dsum = sub.add_parser("dsum", parents=[shared], help="spectrum enclosure of the direct sum D")
    dsum.add_argument("--m-max", type=int, required=True)
    dsum.add_argument("--lam", dest="lambdas", type=_pair, action="append", metavar="RE,IM")
    dsum.add_argument("--re-axis", type=_axis, metavar="MIN,MAX,COUNT")
    dsum.add_argument("--im-axis", type=_axis, metavar="MIN,MAX,COUNT")
    dsum.add_argument("--times", type=_numbers, metavar="T1,T2,...")

    counterexample = sub.add_parser("counterexample", parents=[shared], help="blow-up scan along 1 + ik")
    counterexample.add_argument("--m-max", type=int, required=True)

    for name in ("krivine", "minkowski"):
        suite = sub.add_parser(name, parents=[shared], help=f"seeded {name} inequality suite")
        suite.add_argument("--trials", type=int)

    laplace = sub.add_parser("laplace", parents=[shared], help="Laplace representation of the resolvent")
    laplace.add_argument("--trials", type=int)
    laplace.add_argument("--matrix", type=Path, help="JSON matrix document")
    laplace.add_argument("--lam", type=_pair, metavar="RE,IM")
    laplace.add_argument("--g", type=_numbers, metavar="G1,G2,...")
    laplace.add_argument("--steps", type=int)

    convolution = sub.add_parser("convolution", parents=[shared], help="convolution bound by ||A^-1||")
    convolution.add_argument("--trials", type=int)
    convolution.add_argument("--matrix", type=Path, help="JSON matrix document")
    convolution.add_argument("--step", type=Path, help="JSON step function document")
    convolution.add_argument("--p", type=float)
    convolution.add_argument("--horizon", type=float)
    convolution.add_argument("--points", type=int)

    hyperbolicity = sub.add_parser("hyperbolicity", parents=[shared], help="multiplier constant of (ik - A)^-1")
    hyperbolicity.add_argument("--trials", type=int)
    hyperbolicity.add_argument("--matrix", type=Path, help="JSON matrix document")
    hyperbolicity.add_argument("--n-modes", type=int)
    hyperbolicity.add_argument("--p", type=float)
    hyperbolicity.add_argument("--points", type=int)
    hyperbolicity.add_argument("--families", type=int)

    growth = sub.add_parser("growth", parents=[shared], help="growth bound against spectral bound")
    growth.add_argument("--trials", type=int)
    growth.add_argument("--matrix", type=Path, help="JSON matrix document")
    growth.add_argument("--t-max", type=float)
    growth.add_argument("--samples", type=int)
    return parser


def build_collection(timeout: float | None) -> CommandCollection:
    return CommandCollection(
        ShiftCommand(timeout),
        BmCommand(timeout),
        DsumCommand(timeout),
        CounterexampleCommand(timeout),
        KrivineCommand(timeout),
        MinkowskiCommand(timeout),
        LaplaceCommand(timeout),
        ConvolutionCommand(timeout),
        HyperbolicityCommand(timeout),
        GrowthCommand(timeout),
    )


def dispatch(config: RunConfig) -> int:
    """Run one subcommand, write its output and return the exit status."""
    collection = build_collection(config.timeout)
    result = asyncio.run(collection.run(name=config.subcommand, command_input=config.command_input))
    if isinstance(result, CommandFailure):
        sys.stderr.write(f"error: {result.error}\n")
        return EXIT_USAGE
    if config.out is None:
        sys.stdout.write(result.output or "")
    else:
        try:
            config.out.parent.mkdir(parents=True, exist_ok=True)
            config.out.write_text(result.output or "")
        except OSError as e:
            sys.stderr.write(f"error: cannot write {config.out}: {e.strerror}\n")
            return EXIT_USAGE
    if result.system:
        sys.stderr.write(result.system + "\n")
    for violation in result.violations:
        sys.stderr.write(dumps_line({"command": config.subcommand, **violation}) + "\n")
    if result.violations:
        logger.warning("%d bound violations in %s", len(result.violations), config.subcommand)
        return EXIT_VIOLATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr, format=LOG_FORMAT, force=True)
    try:
        config = RunConfig.from_args(args)
    except FormatError as e:
        sys.stderr.write(f"error: {e.message}\n")
        return EXIT_USAGE
    return dispatch(config)
