"""
The direct sum D of the operators B_M, M = 1, 2, ..., truncated at M_max.

Blocks past M_max are never silently dropped: their mean modes sit at
distance |lambda - 4| from lambda and their rotating modes at distance at
least min over |m| > M_max of |lambda - im|; both are bounded by the uniform
shift estimate 1/(r - 1). Inside the truncation a block whose closed-form
bound is already below the running maximum is not evaluated. A value is
certified only when the tail bound, and the bound on every evaluated block
that was not itself certified, lie strictly below it.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from typing import Any

from .cancellation import checkpoint
from .errors import NumericsError, SpectrumError
from .modeop import (
    MEAN_MODE_SHIFT,
    SPECTRUM_TOL,
    ModeOperator,
    ResolventReport,
    bm_exp_norm,
    bm_norm_bound,
    bm_resolvent_norm,
    tail_bound,
)

logger = logging.getLogger(__name__)

ENCLOSURE_MARGIN = 0.1
GROWTH_SLACK = 1e-9
EXP_ENVELOPE_RATE = 5.0
MIN_SCAN_BLOCKS = 4

GEARHART_NOTE = (
    "Resolvent norms along 1 + iZ grow without bound as M_max increases, so by "
    "the Gearhart-Pruss criterion e^{2pi} lies in sigma(e^{2pi D}) although the "
    "line Re(lambda) = 1 misses sigma(D). The scan certifies the growth; the "
    "spectral membership is the cited conclusion, not recomputed."
)


@dataclass(frozen=True)
class DirectSumOperator:
    """D truncated to the blocks B_1, ..., B_{M_max}."""

    M_max: int

    def __post_init__(self):
        if self.M_max < 1:
            raise NumericsError(f"M_max must be positive, got {self.M_max}")

    @property
    def blocks(self) -> list[ModeOperator]:
        return [ModeOperator(M) for M in range(1, self.M_max + 1)]


@dataclass(kw_only=True, frozen=True)
class ScanRow:
    lam: complex
    norm: float
    attained_M: int
    attained_n: int
    certified: bool
    upper_bound: float = math.inf


@dataclass(kw_only=True, frozen=True)
class ScanTable:
    """Rows sorted by Im(lambda); `notes` carries skipped points and interpretation lines."""

    rows: list[ScanRow]
    M_max: int
    grid: str
    notes: list[str] = field(default_factory=list)
    violations: list[dict[str, Any]] = field(default_factory=list)


def tail_distance(M_max: int, lam: complex) -> float:
    """min over integers |m| > M_max of |lambda - im|: the nearest rotating mode of any block past M_max."""
    y = abs(lam.imag)
    first = M_max + 1
    gap = first - y if y <= first else abs(y - round(y))
    return math.hypot(lam.real, gap)


def d_tail_bound(op: DirectSumOperator, lam: complex) -> float:
    """Bound on ||(lambda - B_M)^{-1}|| valid for every M > M_max."""
    return max(
        tail_bound(abs(lam - MEAN_MODE_SHIFT)),
        tail_bound(tail_distance(op.M_max, lam)),
    )


def _check_off_spectrum(lam: complex) -> None:
    nearest = round(lam.imag)
    if nearest != 0 and abs(lam - 1j * nearest) < SPECTRUM_TOL:
        raise SpectrumError(f"lambda in sigma(B_M): lambda={lam!r} is within {SPECTRUM_TOL} of {1j * nearest!r}")


def d_resolvent_norm(op: DirectSumOperator, lam: complex) -> ResolventReport:
    """
    sup over M of ||(lambda - B_M)^{-1}||.

    Blocks are visited in decreasing order of their closed-form bound and a
    block is skipped once that bound falls below the best norm found. Ties in
    the norm go to the smaller M.
    """
    lam = complex(lam)
    _check_off_spectrum(lam)
    screened = sorted(
        ((bm_norm_bound(block, lam), block) for block in op.blocks),
        key=lambda item: (-item[0], item[1].M),
    )
    reports: list[ResolventReport] = []
    skipped_bound = 0.0
    best_norm = -math.inf
    for bound, block in screened:
        checkpoint()
        if bound < best_norm:
            skipped_bound = max(skipped_bound, bound)
            continue
        report = bm_resolvent_norm(block, lam)
        reports.append(report)
        best_norm = max(best_norm, report.norm)
    best = min(reports, key=lambda r: (-r.norm, r.attained[0]))
    tail = d_tail_bound(op, lam)
    blocks_settled = all(r.certified or r.upper_bound < best.norm for r in reports)
    certified = blocks_settled and tail < best.norm
    upper = max(tail, skipped_bound, *(r.upper_bound for r in reports))
    logger.debug(
        "D resolvent at %r (M_max=%d): norm=%.6g at M=%d, %d of %d blocks, tail=%.3g, certified=%s",
        lam, op.M_max, best.norm, best.attained[0], len(reports), op.M_max, tail, certified,
    )
    return ResolventReport(
        lam=lam,
        norm=best.norm,
        attained=best.attained,
        pruning_radius=best.pruning_radius,
        certified=certified,
        upper_bound=upper,
        modes_examined=sum(r.modes_examined for r in reports),
    )


def enclosure_distance(lam: complex) -> float:
    """Distance from lambda to {|z - 4| <= 1} union iZ minus {0}."""
    disk = max(0.0, abs(lam - MEAN_MODE_SHIFT) - 1.0)
    nearest = round(lam.imag)
    if nearest == 0:
        nearest = 1 if lam.imag >= 0 else -1
    return min(disk, abs(lam - 1j * nearest))


def spectrum_enclosure_report(op: DirectSumOperator, grid: Iterable[complex]) -> ScanTable:
    """
    Certified finite bounds on ||(lambda - D)^{-1}|| over a grid of lambda.

    Here the `norm` column is the certified upper bound and `certified` says
    it is finite, which is what membership in the resolvent set needs. Points
    within 0.1 of the enclosure set are skipped and listed in `notes`.
    """
    points = sorted((complex(z) for z in grid), key=lambda z: (z.imag, z.real))
    if not points:
        raise NumericsError("grid must not be empty")
    rows: list[ScanRow] = []
    notes: list[str] = []
    for lam in points:
        checkpoint()
        if enclosure_distance(lam) < ENCLOSURE_MARGIN:
            notes.append(
                f"skipped lambda={lam.real:.6g}{lam.imag:+.6g}i: within {ENCLOSURE_MARGIN} of the enclosure"
            )
            continue
        report = d_resolvent_norm(op, lam)
        finite = math.isfinite(report.upper_bound)
        if not finite:
            notes.append(f"no finite tail bound at lambda={lam.real:.6g}{lam.imag:+.6g}i")
        rows.append(
            ScanRow(
                lam=lam,
                norm=report.upper_bound if finite else report.norm,
                attained_M=report.attained[0],
                attained_n=report.attained[1],
                certified=finite,
                upper_bound=report.upper_bound,
            )
        )
    return ScanTable(
        rows=rows,
        M_max=op.M_max,
        grid=f"{len(points)} points, Im in [{points[0].imag:g}, {points[-1].imag:g}]",
        notes=notes,
    )


def blowup_scan(op: DirectSumOperator) -> ScanTable:
    """
    ||(1 + ik - D)^{-1}|| for k = 1..M_max. Block B_k contributes at least
    sqrt(k) at 1 + ik, so the running maximum must reach sqrt(k).
    """
    if op.M_max < MIN_SCAN_BLOCKS:
        raise NumericsError(f"blowup scan needs M_max >= {MIN_SCAN_BLOCKS}, got {op.M_max}")
    rows: list[ScanRow] = []
    violations: list[dict[str, Any]] = []
    running = 0.0
    for k in range(1, op.M_max + 1):
        checkpoint()
        lam = complex(1.0, k)
        report = d_resolvent_norm(op, lam)
        running = max(running, report.norm)
        if running < math.sqrt(k) - GROWTH_SLACK:
            violations.append(
                {"check": "blowup_sqrt_k", "k": k, "value": running, "bound": math.sqrt(k)}
            )
        if not report.certified:
            violations.append({"check": "blowup_certified", "k": k, "value": report.norm})
        rows.append(
            ScanRow(
                lam=lam,
                norm=report.norm,
                attained_M=report.attained[0],
                attained_n=report.attained[1],
                certified=report.certified,
                upper_bound=report.upper_bound,
            )
        )
    logger.info("blowup scan M_max=%d: final running max %.6g", op.M_max, running)
    return ScanTable(
        rows=rows,
        M_max=op.M_max,
        grid=f"lambda = 1 + ik, k = 1..{op.M_max}",
        notes=[GEARHART_NOTE],
        violations=violations,
    )


def d_exp_norm(op: DirectSumOperator, t: float) -> float:
    """||e^{tD}|| over the truncated sum; the blocks increase with M toward e^{5t}."""
    return max(bm_exp_norm(block, t) for block in op.blocks)


def exp_envelope(t: float) -> float:
    return math.exp(EXP_ENVELOPE_RATE * t)
