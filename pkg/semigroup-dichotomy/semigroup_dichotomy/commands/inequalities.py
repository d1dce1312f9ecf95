from typing import Literal

from ..lattice import InequalityReport, krivine_suite, minkowski_suite
from .base import CommandResult, OutputFormat, ReportCommand
from .run import run

_TRIALS = {"type": "integer", "minimum": 1}


def verdict(report: InequalityReport) -> str:
    status = "holds" if report else f"{len(report.violations)} violations"
    return f"{report.trials} trials, worst margin {report.worst_margin:.3e} (tolerance {report.tolerance:g}): {status}"


class KrivineCommand(ReportCommand):
    """The p-sum inequality for positive matrices over seeded random families."""

    name: Literal["krivine"] = "krivine"
    description = "Check (sum |P f_k|^p)^{1/p} <= P (sum |f_k|^p)^{1/p} and its l.u.b. dual on seeded trials."
    properties = {"trials": _TRIALS}

    async def __call__(
        self,
        *,
        trials: int = 500,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        report = await run(krivine_suite, trials, seed, timeout=self.timeout)
        return self.result(
            report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations
        )


class MinkowskiCommand(ReportCommand):
    """The integral Minkowski inequality over seeded random nonnegative grids."""

    name: Literal["minkowski"] = "minkowski"
    description = "Check the integral Minkowski inequality on seeded random nonnegative grids."
    properties = {"trials": _TRIALS}

    async def __call__(
        self,
        *,
        trials: int = 200,
        seed: int = 0,
        output_format: OutputFormat = "json",
        tol_report: bool = False,
        **kwargs,
    ) -> CommandResult:
        report = await run(minkowski_suite, trials, seed, timeout=self.timeout)
        return self.result(
            report.to_dict(), output_format=output_format, seed=seed, verdict=verdict(report), violations=report.violations
        )
