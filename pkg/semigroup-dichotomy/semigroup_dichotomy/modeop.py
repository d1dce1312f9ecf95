"""
The generator B_M = A_M (x) I + I (x) C_M in its Fourier-mode block form.

On L_2([0, 2pi]) (x) l_2^M the mode e^{inx} v is invariant: A_M acts on it by
the scalar mu_n (4 on the mean mode, inM on the rotating modes) so B_M acts as
mu_n + C_M. Resolvent and semigroup norms are maxima over these blocks.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any

from .cancellation import checkpoint
from .errors import NumericsError, SpectrumError
from .numlin import op_norm2
from .shiftblock import ShiftBlock, shift_exp, shift_norm_bound, shift_resolvent

logger = logging.getLogger(__name__)

MEAN_MODE_SHIFT = 4.0
SPECTRUM_TOL = 1e-8
INITIAL_RADIUS = 2.0
MAX_MODES = 64


def mode_shift(M: int, n: int) -> complex:
    """mu_n: 4 on the mean mode, i n M on the others."""
    if M < 1:
        raise NumericsError(f"M must be positive, got {M}")
    return complex(MEAN_MODE_SHIFT) if n == 0 else 1j * n * M


def am_mode_factor(M: int, n: int, t: float) -> complex:
    """Scalar by which e^{tA_M} multiplies the mode e^{inx}."""
    return cmath.exp(mode_shift(M, n) * t)


def am_exp_norm(M: int, t: float) -> float:
    """||e^{tA_M}||: the mean mode grows like e^{4t}, the rotations are unitary."""
    if t < 0:
        raise NumericsError(f"t must be nonnegative, got {t}")
    return max(abs(am_mode_factor(M, 0, t)), abs(am_mode_factor(M, 1, t)))


@dataclass(frozen=True)
class ModeOperator:
    """B_M, stored as its block dimension; the blocks are mode_shift(M, n) + C_M."""

    M: int

    def __post_init__(self):
        ShiftBlock(self.M)

    @property
    def block(self) -> ShiftBlock:
        return ShiftBlock(self.M)

    def shift(self, n: int) -> complex:
        return mode_shift(self.M, n)


@dataclass(kw_only=True, frozen=True)
class ResolventReport:
    """
    Resolvent norm at `lam`.

    `norm` is the maximum over the examined blocks; `certified` means every
    block left out is bounded strictly below it, so `norm` is the exact value.
    `upper_bound` is a certified bound on the exact value either way.
    """

    lam: complex
    norm: float
    attained: tuple[int, int]
    pruning_radius: float
    certified: bool
    upper_bound: float
    modes_examined: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "norm": self.norm,
            "attained": {"M": self.attained[0], "n": self.attained[1]},
            "pruning_radius": self.pruning_radius,
            "certified": self.certified,
            "upper_bound": self.upper_bound if math.isfinite(self.upper_bound) else None,
        }


def tail_bound(radius: float) -> float:
    """Uniform bound ||(z - C_M)^{-1}|| <= 1/(|z| - 1) for every |z| >= radius > 1."""
    return 1.0 / (radius - 1.0) if radius > 1.0 else math.inf


def check_off_spectrum(op: ModeOperator, lam: complex) -> None:
    lam = complex(lam)
    if abs(lam - MEAN_MODE_SHIFT) < SPECTRUM_TOL:
        raise SpectrumError(f"lambda in sigma(B_M): lambda={lam!r} is within {SPECTRUM_TOL} of 4")
    nearest = round(lam.imag / op.M)
    if nearest != 0 and abs(lam - op.shift(nearest)) < SPECTRUM_TOL:
        raise SpectrumError(
            f"lambda in sigma(B_M): lambda={lam!r} is within {SPECTRUM_TOL} of {op.shift(nearest)!r}"
        )


def nearest_mode_distance(op: ModeOperator, lam: complex) -> float:
    """Distance from lambda to the nearest mu_n of B_M."""
    lam = complex(lam)
    nearest = round(lam.imag / op.M)
    rotating = [n for n in (nearest - 1, nearest, nearest + 1) if n != 0]
    return min(abs(lam - op.shift(n)) for n in [0, *rotating])


def bm_norm_bound(op: ModeOperator, lam: complex) -> float:
    """Closed-form bound on ||(lambda - B_M)^{-1}|| from the nearest mode alone."""
    return shift_norm_bound(op.M, nearest_mode_distance(op, lam))


def _candidate_modes(op: ModeOperator, lam: complex, radius: float) -> list[tuple[float, int]]:
    """All modes within `radius` of lam plus at least two more on each side, nearest first."""
    low = math.floor((lam.imag - radius) / op.M) - 2
    high = math.ceil((lam.imag + radius) / op.M) + 2
    modes = {0, *(n for n in range(low, high + 1) if n != 0)}
    ranked = [(abs(lam - op.shift(n)), n) for n in modes]
    ranked.sort(key=lambda item: (item[0], abs(item[1]), item[1]))
    return ranked


def bm_resolvent_norm(op: ModeOperator, lam: complex) -> ResolventReport:
    """
    ||(lambda - B_M)^{-1}|| = max over modes n of ||(lambda - mu_n - C_M)^{-1}||.

    Modes are examined nearest first inside a radius that starts at 2 and
    doubles; every unexamined mode lies at distance >= pruning_radius and is
    bounded by 1/(pruning_radius - 1).
    """
    lam = complex(lam)
    check_off_spectrum(op, lam)
    norms: dict[int, float] = {}
    radius = INITIAL_RADIUS
    while True:
        checkpoint()
        candidates = _candidate_modes(op, lam, radius)
        examined = [n for distance, n in candidates if distance < radius] or [candidates[0][1]]
        capped = len(examined) >= MAX_MODES
        examined = examined[:MAX_MODES]
        for n in examined:
            if n not in norms:
                norms[n] = op_norm2(shift_resolvent(op.M, lam - op.shift(n)))
        chosen = set(examined)
        pruning_radius = min(distance for distance, n in candidates if n not in chosen)
        best_n = min(chosen, key=lambda n: (-norms[n], abs(n), n))
        best = norms[best_n]
        tail = tail_bound(pruning_radius)
        if tail < best or capped:
            break
        radius *= 2.0
    certified = tail < best
    logger.debug(
        "B_%d resolvent at %r: norm=%.6g (n=%d), radius=%.3g, %d modes, certified=%s",
        op.M, lam, best, best_n, pruning_radius, len(chosen), certified,
    )
    return ResolventReport(
        lam=lam,
        norm=best,
        attained=(op.M, best_n),
        pruning_radius=pruning_radius,
        certified=certified,
        upper_bound=max(best, tail),
        modes_examined=len(chosen),
    )


def bm_exp_norm(op: ModeOperator, t: float) -> float:
    """||e^{tB_M}|| = max_n |e^{t mu_n}| * ||e^{tC_M}|| = e^{4t} ||e^{tC_M}||."""
    if t < 0:
        raise NumericsError(f"t must be nonnegative, got {t}")
    return am_exp_norm(op.M, t) * op_norm2(shift_exp(op.M, t))


def bm_spectrum_points(op: ModeOperator, window: int) -> list[complex]:
    """{4} together with the points i n M, 0 < |n| <= window."""
    if window < 0:
        raise NumericsError(f"window must be nonnegative, got {window}")
    points = [op.shift(0)]
    for n in range(1, window + 1):
        points.extend([op.shift(n), op.shift(-n)])
    return points
