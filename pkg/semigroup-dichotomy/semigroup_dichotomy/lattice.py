"""
Positive-operator inequalities on the finite lattice C^d.

The measure space is a finite index set with counting measure, so a p-sum
(sum_k |f_k|^p)^{1/p} is taken componentwise and a positive operator is an
entrywise nonnegative matrix.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from .cancellation import checkpoint
from .errors import NumericsError
from .formats import encode_cmatrix
from .numlin import CMatrix, as_nonneg
from .quadrature import TWO_PI, trapezoid_weights

logger = logging.getLogger(__name__)

MARGIN_TOL = 1e-10
DUAL_TOL = 1e-10
BREAK_TOL = 1e-12
KRIVINE_EXPONENTS = (1.0, 1.5, 2.0, 3.0, 10.0)
MINKOWSKI_EXPONENTS = (1.0, 2.0, 3.0, 7.0)
KRIVINE_MAX_DIM = 6
KRIVINE_MAX_VECTORS = 5
MINKOWSKI_MAX_SIZE = 32


def conjugate_exponent(p: float) -> float:
    """q with 1/p + 1/q = 1; infinite for p = 1."""
    if not p >= 1.0:
        raise NumericsError(f"p < 1 is not allowed, got {p}")
    return math.inf if p == 1.0 else p / (p - 1.0)


@dataclass(frozen=True)
class VectorFamily:
    """k vectors f_1..f_k of common dimension d, stored as rows, with exponent p."""

    vectors: CMatrix
    p: float

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.vectors, dtype=np.complex128))
        if rows.ndim != 2 or rows.size == 0:
            raise NumericsError(f"family must be a non-empty k x d array, got shape {rows.shape}")
        if not math.isfinite(self.p):
            raise NumericsError(f"p must be finite, got {self.p}")
        conjugate_exponent(self.p)
        object.__setattr__(self, "vectors", rows)

    @property
    def k(self) -> int:
        return self.vectors.shape[0]

    @property
    def d(self) -> int:
        return self.vectors.shape[1]

    @property
    def q(self) -> float:
        return conjugate_exponent(self.p)


@dataclass(kw_only=True, frozen=True)
class InequalityReport:
    """
    Outcome of a seeded suite.

    `worst_margin` is the smallest normalized margin over all trials and
    `witness` the inputs of that trial, replayable from (seed, trial).
    """

    name: str
    trials: int
    seed: int
    worst_margin: float
    witness: dict[str, Any] | None = None
    tolerance: float | None = None
    violations: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __bool__(self):
        return not self.violations

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "check": self.name,
            "trials": self.trials,
            "seed": self.seed,
            "worst_margin": self.worst_margin,
        }
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        if self.witness is not None:
            out["witness"] = self.witness
        if self.violations:
            out["violations"] = self.violations
        if self.notes:
            out["notes"] = self.notes
        return out


def pvector_norm(fam: VectorFamily) -> npt.NDArray[np.float64]:
    """Componentwise (sum_k |f_k(j)|^p)^{1/p}."""
    moduli = np.abs(fam.vectors)
    peak = moduli.max(axis=0)
    safe = np.where(peak > 0.0, peak, 1.0)
    # scaled by the componentwise peak so p = 10 does not overflow
    return peak * ((moduli / safe) ** fam.p).sum(axis=0) ** (1.0 / fam.p)


def krivine_margin(P: npt.ArrayLike, fam: VectorFamily) -> float:
    """min_j [P (sum |f_k|^p)^{1/p}]_j - [(sum |P f_k|^p)^{1/p}]_j."""
    mat = as_nonneg(P)
    if mat.shape[0] != mat.shape[1]:
        raise NumericsError(f"positive operator must be square, got shape {mat.shape}")
    if mat.shape[1] != fam.d:
        raise NumericsError(
            f"dimension mismatch: operator is {mat.shape[0]} x {mat.shape[1]}, vectors have dimension {fam.d}"
        )
    images = VectorFamily(fam.vectors @ mat.T, fam.p)
    rhs = mat @ pvector_norm(fam)
    lhs = pvector_norm(images)
    return float((rhs - lhs).min())


def holder_coefficients(fam: VectorFamily) -> CMatrix:
    """
    Per component j, the tuple (a_k) attaining the l.u.b. of sum_k Re(a_k f_k(j))
    over sum_k |a_k|^q <= 1 (max_k |a_k| <= 1 when p = 1). Shape k x d.
    """
    f = fam.vectors
    moduli = np.abs(f)
    phase = np.divide(np.conj(f), moduli, out=np.zeros_like(f), where=moduli > 0.0)
    if fam.p == 1.0:
        return phase
    norm = pvector_norm(fam)
    safe = np.where(norm > 0.0, norm, 1.0)
    return phase * (moduli / safe) ** (fam.p - 1.0)


def _dual_sphere_sample(rng: np.random.Generator, k: int, q: float) -> npt.NDArray[np.complex128]:
    draw = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    scale = np.abs(draw).max() if math.isinf(q) else np.linalg.norm(draw, q)
    return draw / scale


def lub_dual_lower(fam: VectorFamily, samples: int, seed: int) -> npt.NDArray[np.float64]:
    """
    Componentwise max of sum_k Re(a_k f_k) over sampled dual tuples.

    Sample 0 is the Hölder-optimal tuple of each component; the remaining
    samples - 1 tuples are Gaussian draws normalized onto the unit q-sphere.
    """
    if samples < 1:
        raise NumericsError(f"samples must be at least 1, got {samples}")
    best = (holder_coefficients(fam) * fam.vectors).sum(axis=0).real
    rng = np.random.default_rng(seed)
    for _ in range(samples - 1):
        checkpoint()
        a = _dual_sphere_sample(rng, fam.k, fam.q)
        best = np.maximum(best, (a @ fam.vectors).real)
    return best


def _validate_grid(g: npt.ArrayLike) -> npt.NDArray[np.float64]:
    grid = np.asarray(g, dtype=np.float64)
    if grid.ndim != 2 or grid.size == 0:
        raise NumericsError(f"grid must be a non-empty 2-D array, got shape {grid.shape}")
    if np.any(grid < 0.0):
        raise NumericsError(f"negative entry {grid.min()!r} in nonnegative grid")
    return grid


def minkowski_margin(
    g: npt.ArrayLike,
    p: float,
    s_weights: npt.ArrayLike,
    t_weights: npt.ArrayLike | None = None,
) -> float:
    """
    sum_s w_s (sum_t w_t g^p)^{1/p} - (sum_t w_t (sum_s w_s g)^p)^{1/p}.

    Rows of `g` are indexed by s, columns by t. `t_weights` defaults to
    `s_weights`.
    """
    grid = _validate_grid(g)
    conjugate_exponent(p)
    ws = np.asarray(s_weights, dtype=np.float64)
    wt = ws if t_weights is None else np.asarray(t_weights, dtype=np.float64)
    if ws.shape != (grid.shape[0],) or wt.shape != (grid.shape[1],):
        raise NumericsError(
            f"weights of shapes {ws.shape}, {wt.shape} do not match grid of shape {grid.shape}"
        )
    inner = (grid**p @ wt) ** (1.0 / p)
    lhs = float(ws @ inner)
    rhs = float((wt @ (ws @ grid) ** p) ** (1.0 / p))
    return lhs - rhs


@dataclass(frozen=True)
class StepFunction:
    """
    f = sum_j values[j] chi_[breaks[j], breaks[j+1]) on [0, 2pi], extended
    2pi-periodically. Point values are taken from the right.
    """

    breaks: npt.NDArray[np.float64]
    values: CMatrix

    def __post_init__(self):
        breaks = np.asarray(self.breaks, dtype=np.float64)
        values = np.atleast_2d(np.asarray(self.values, dtype=np.complex128))
        if breaks.ndim != 1 or breaks.size < 2:
            raise NumericsError("a step function needs at least two breaks")
        if abs(breaks[0]) > BREAK_TOL or abs(breaks[-1] - TWO_PI) > BREAK_TOL:
            raise NumericsError(f"breaks must run from 0 to 2pi, got [{breaks[0]}, {breaks[-1]}]")
        if np.any(np.diff(breaks) <= 0.0):
            raise NumericsError("breaks must be strictly increasing")
        if values.ndim != 2 or values.shape[0] != breaks.size - 1:
            raise NumericsError(
                f"{breaks.size} breaks need {breaks.size - 1} values, got shape {values.shape}"
            )
        breaks[0], breaks[-1] = 0.0, TWO_PI
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, value: npt.ArrayLike) -> "StepFunction":
        return cls(np.array([0.0, TWO_PI]), np.atleast_2d(np.asarray(value, dtype=np.complex128)))

    @property
    def d(self) -> int:
        return self.values.shape[1]

    @property
    def lengths(self) -> npt.NDArray[np.float64]:
        return np.diff(self.breaks)

    def __call__(self, t: npt.ArrayLike) -> CMatrix:
        x = np.mod(np.asarray(t, dtype=np.float64), TWO_PI)
        index = np.searchsorted(self.breaks, x, side="right") - 1
        return self.values[np.clip(index, 0, self.values.shape[0] - 1)]

    def lp_norm(self, p: float) -> float:
        """(integral over [0, 2pi] of ||f(t)||_p^p dt)^{1/p}, lattice norm l_p^d inside."""
        conjugate_exponent(p)
        pointwise = np.linalg.norm(self.values, ord=p, axis=1)
        return float((self.lengths @ pointwise**p) ** (1.0 / p))


def family_from_step(step: StepFunction, p: float) -> VectorFamily:
    """
    f_k = v_k |A_k|^{1/p} for f = sum_k v_k chi_{A_k}: the finite family whose
    p-sum is (integral |f|^p)^{1/p}.
    """
    conjugate_exponent(p)
    return VectorFamily(step.values * (step.lengths ** (1.0 / p))[:, None], p)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent stream for one trial, so suites are order-independent."""
    return np.random.default_rng([seed, trial])


def _krivine_trial(seed: int, trial: int) -> tuple[np.ndarray, VectorFamily]:
    rng = trial_rng(seed, trial)
    d = int(rng.integers(1, KRIVINE_MAX_DIM + 1))
    k = int(rng.integers(1, KRIVINE_MAX_VECTORS + 1))
    p = KRIVINE_EXPONENTS[int(rng.integers(len(KRIVINE_EXPONENTS)))]
    P = rng.uniform(0.0, 1.0, size=(d, d))
    f = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
    return P, VectorFamily(f, p)


def krivine_suite(trials: int = 500, seed: int = 0) -> InequalityReport:
    """
    Random positive P and complex Gaussian families. Margins are normalized by
    ||P||_1 max_k ||f_k||; the dual representation is checked at the Hölder
    tuple for p > 1.
    """
    if trials < 1:
        raise NumericsError(f"trials must be at least 1, got {trials}")
    worst = math.inf
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        checkpoint()
        P, fam = _krivine_trial(seed, trial)
        scale = float(P.sum(axis=0).max() * np.linalg.norm(fam.vectors, axis=1).max())
        margin = krivine_margin(P, fam) / scale if scale > 0.0 else 0.0
        if margin < worst:
            worst = margin
            witness = {
                "trial": trial,
                "p": fam.p,
                "P": encode_cmatrix(P),
                "vectors": encode_cmatrix(fam.vectors),
            }
        if margin < -MARGIN_TOL:
            violations.append({"check": "krivine_margin", "trial": trial, "value": margin, "bound": -MARGIN_TOL})
        if fam.p > 1.0:
            exact = pvector_norm(fam)
            dual = lub_dual_lower(fam, samples=1, seed=trial)
            relative = float(np.max(np.abs(dual - exact) / np.maximum(exact, 1e-300)))
            if relative > DUAL_TOL:
                violations.append({"check": "lub_dual", "trial": trial, "value": relative, "bound": DUAL_TOL})
    logger.info("krivine suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="krivine",
        trials=trials,
        seed=seed,
        worst_margin=worst,
        witness=witness,
        tolerance=MARGIN_TOL,
        violations=violations,
    )


def minkowski_suite(trials: int = 200, seed: int = 0) -> InequalityReport:
    """
    Random nonnegative grids up to 32 x 32 with trapezoid weights on [0, 1].
    Margins are normalized by max(1, right-hand side).
    """
    if trials < 1:
        raise NumericsError(f"trials must be at least 1, got {trials}")
    worst = math.inf
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        checkpoint()
        rng = trial_rng(seed, trial)
        ns, nt = (int(n) for n in rng.integers(2, MINKOWSKI_MAX_SIZE + 1, size=2))
        p = MINKOWSKI_EXPONENTS[int(rng.integers(len(MINKOWSKI_EXPONENTS)))]
        g = rng.uniform(0.0, 1.0, size=(ns, nt)) * (rng.uniform(size=(ns, nt)) > 0.3)
        _, ws = trapezoid_weights(0.0, 1.0, ns - 1)
        _, wt = trapezoid_weights(0.0, 1.0, nt - 1)
        margin = minkowski_margin(g, p, ws, wt)
        rhs = float((wt @ (ws @ g) ** p) ** (1.0 / p))
        normalized = margin / max(1.0, rhs)
        if normalized < worst:
            worst = normalized
            witness = {"trial": trial, "p": p, "shape": [ns, nt]}
        if normalized < -MARGIN_TOL:
            violations.append({"check": "minkowski_margin", "trial": trial, "value": normalized, "bound": -MARGIN_TOL})
    logger.info("minkowski suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="minkowski",
        trials=trials,
        seed=seed,
        worst_margin=worst,
        witness=witness,
        tolerance=MARGIN_TOL,
        violations=violations,
    )
