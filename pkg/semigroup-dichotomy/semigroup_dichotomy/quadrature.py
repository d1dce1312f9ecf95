"""Composite trapezoid rules with a Richardson error estimate at halved resolution."""

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .errors import NumericsError

TWO_PI = 2.0 * math.pi


@dataclass(kw_only=True, frozen=True)
class Estimate:
    """An integral value together with the error estimate reported alongside it."""

    value: npt.NDArray | float
    error: float
    points: int


def trapezoid_weights(a: float, b: float, n: int) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Nodes and weights of the composite trapezoid rule with n intervals on [a, b]."""
    if n < 1:
        raise NumericsError(f"trapezoid rule needs at least one interval, got {n}")
    nodes = np.linspace(a, b, n + 1)
    weights = np.full(n + 1, (b - a) / n)
    weights[[0, -1]] *= 0.5
    return nodes, weights


def trapezoid(samples: npt.ArrayLike, h: float) -> npt.NDArray:
    """Composite trapezoid along the first axis of equally spaced samples."""
    y = np.asarray(samples)
    if y.shape[0] < 2:
        raise NumericsError("trapezoid rule needs at least two samples")
    return h * (y.sum(axis=0) - 0.5 * (y[0] + y[-1]))


def periodic_nodes(n: int, period: float = TWO_PI) -> npt.NDArray[np.float64]:
    if n < 1:
        raise NumericsError(f"periodic rule needs at least one node, got {n}")
    return np.arange(n) * (period / n)


def periodic_trapezoid(samples: npt.ArrayLike, period: float = TWO_PI) -> npt.NDArray:
    """Trapezoid rule for a periodic integrand sampled at :func:`periodic_nodes`."""
    y = np.asarray(samples)
    return period * y.mean(axis=0)


def richardson(fine: npt.ArrayLike, coarse: npt.ArrayLike, order: int = 2) -> tuple[npt.NDArray, float]:
    """
    Extrapolate two rules whose step sizes differ by a factor of two.

    Returns the extrapolated value and the estimated error of `fine`,
    |fine - coarse| / (2^order - 1), in the maximum norm.
    """
    f = np.asarray(fine)
    c = np.asarray(coarse)
    factor = 2.0**order - 1.0
    correction = (f - c) / factor
    return f + correction, float(np.max(np.abs(correction)))


def trapezoid_richardson(samples: npt.ArrayLike, h: float) -> Estimate:
    """
    Trapezoid at step h and 2h on the same samples, extrapolated once.

    The number of intervals must be even so the coarse rule reuses every
    other sample.
    """
    y = np.asarray(samples)
    intervals = y.shape[0] - 1
    if intervals < 2 or intervals % 2:
        raise NumericsError(f"need an even number of intervals, got {intervals}")
    fine = trapezoid(y, h)
    coarse = trapezoid(y[::2], 2.0 * h)
    value, error = richardson(fine, coarse)
    return Estimate(value=value, error=error, points=y.shape[0])


def periodic_richardson(samples: npt.ArrayLike, period: float = TWO_PI) -> Estimate:
    """
    Periodic trapezoid on n samples against the rule on every other sample.

    The fine value is kept as is and the full difference is the reported
    error, since periodic integrands with kinks need not show clean order-two
    behavior.
    """
    y = np.asarray(samples)
    n = y.shape[0]
    if n < 2 or n % 2:
        raise NumericsError(f"need an even number of periodic samples, got {n}")
    fine = periodic_trapezoid(y, period)
    coarse = periodic_trapezoid(y[::2], period)
    return Estimate(value=fine, error=float(np.max(np.abs(fine - coarse))), points=n)
