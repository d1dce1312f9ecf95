"""Closed forms for the nilpotent shift C_M and its resolvent and exponential."""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import NumericsError, SpectrumError
from .numlin import CMatrix, op_norm2

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-9
UNIT_MODULUS_TOL = 1e-12


@dataclass(frozen=True)
class ShiftBlock:
    """The M x M shift with ones on the superdiagonal."""

    M: int

    def __post_init__(self):
        if not isinstance(self.M, int | np.integer) or self.M < 1:
            raise NumericsError(f"block dimension M must be a positive integer, got {self.M!r}")


@dataclass(kw_only=True, frozen=True)
class ShiftBoundsReport:
    """Norm of (lambda - C_M)^{-1} next to the closed-form bounds that apply at lambda."""

    M: int
    lam: complex
    norm: float
    lower: float | None = None
    upper: float | None = None
    violations: list[dict[str, Any]] = field(default_factory=list)

    def __bool__(self):
        return not self.violations


def _toeplitz_upper(diagonals: np.ndarray) -> CMatrix:
    """Upper-triangular Toeplitz matrix whose k-th superdiagonal is diagonals[k]."""
    m = len(diagonals)
    i, j = np.indices((m, m))
    offset = j - i
    out = np.zeros((m, m), dtype=np.complex128)
    mask = offset >= 0
    out[mask] = diagonals[offset[mask]]
    return out


def make_shift(M: int) -> CMatrix:
    block = ShiftBlock(M)
    return np.eye(block.M, k=1, dtype=np.complex128)


def shift_resolvent(M: int, lam: complex) -> CMatrix:
    """
    (lambda - C_M)^{-1} = sum_j lambda^{-1-j} C_M^j, built entrywise.

    The inverse 1/lambda is formed once and the powers are multiplied up.
    """
    block = ShiftBlock(M)
    lam = complex(lam)
    if lam == 0:
        raise SpectrumError("0 is the spectrum of C_M; lambda must be nonzero")
    inverse = 1.0 / lam
    powers = np.empty(block.M, dtype=np.complex128)
    current = inverse
    for k in range(block.M):
        powers[k] = current
        current *= inverse
    if not np.all(np.isfinite(powers)):
        raise NumericsError(
            f"resolvent of C_{block.M} overflows at |lambda|={abs(lam):.3e}"
        )
    return _toeplitz_upper(powers)


def shift_exp(M: int, t: float) -> CMatrix:
    """e^{tC_M}: upper-triangular Toeplitz with diagonals t^k / k!."""
    block = ShiftBlock(M)
    coefficients = np.empty(block.M, dtype=np.complex128)
    current = 1.0
    for k in range(block.M):
        coefficients[k] = current
        current *= t / (k + 1)
    return _toeplitz_upper(coefficients)


def shift_bounds_report(M: int, lam: complex) -> ShiftBoundsReport:
    """
    Compare ||(lambda - C_M)^{-1}|| with sqrt(M) when |lambda| = 1 and with
    1/(|lambda| - 1) when |lambda| > 1.
    """
    lam = complex(lam)
    norm = op_norm2(shift_resolvent(M, lam))
    modulus = abs(lam)
    lower = math.sqrt(M) if abs(modulus - 1.0) <= UNIT_MODULUS_TOL else None
    upper = 1.0 / (modulus - 1.0) if modulus > 1.0 else None
    violations = []
    if lower is not None and norm < lower - BOUND_SLACK:
        violations.append({"check": "shift_lower_sqrt_m", "value": norm, "bound": lower, "M": M})
    if upper is not None and norm > upper + BOUND_SLACK:
        violations.append({"check": "shift_upper_geometric", "value": norm, "bound": upper, "M": M})
    if violations:
        logger.warning("shift bounds violated for M=%d, lambda=%r: %s", M, lam, violations)
    return ShiftBoundsReport(
        M=M, lam=lam, norm=norm, lower=lower, upper=upper, violations=violations
    )


def shift_norm_bound(M: int, modulus: float) -> float:
    """sum_{j<M} |lambda|^{-1-j}, the triangle-inequality bound on ||(lambda - C_M)^{-1}||."""
    block = ShiftBlock(M)
    if modulus <= 0.0:
        return math.inf
    if modulus == 1.0:
        return float(block.M)
    try:
        return (1.0 - modulus ** (-block.M)) / (modulus - 1.0)
    except OverflowError:
        return math.inf
