"""
Semigroup-level quantities of a finite generator A.

Growth bound against spectral bound, the Laplace representation of the
resolvent of a positive semigroup, the convolution bound by ||A^{-1}|| and the
Fourier-multiplier constant that characterizes hyperbolicity of e^{2pi A}.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np
import numpy.typing as npt

from .cancellation import checkpoint
from .errors import NumericsError, QuadratureError
from .formats import encode_cmatrix
from .lattice import InequalityReport, StepFunction, trial_rng
from .numlin import (
    CMatrix,
    as_square,
    eigenvalues,
    expm,
    is_metzler,
    op_norm2,
    pnorm_nonneg,
    resolvent_apply,
    resolvent_matrix,
    spectral_bound,
    top_singular_pair,
)
from .quadrature import (
    TWO_PI,
    periodic_nodes,
    periodic_richardson,
    periodic_trapezoid,
    trapezoid_richardson,
)

logger = logging.getLogger(__name__)

PositivityClass = Literal["metzler-positive-semigroup", "general"]
METZLER: PositivityClass = "metzler-positive-semigroup"
GENERAL: PositivityClass = "general"

LOG_NORM_LIMIT = 700.0
GROWTH_TOL = 0.05
MIN_GROWTH_SAMPLES = 8

LAPLACE_MARGIN = 0.1
LAPLACE_DECAY = 1e-10
LAPLACE_MIN_STEPS = 4096
LAPLACE_STEP_SCALE = 0.05
LAPLACE_TOL = 1e-6
LAPLACE_BATCH = 64

CONVOLUTION_MAX_BOUND = -0.05
CONVOLUTION_POINTS = 256
GRID_SNAP = 1e-9
NEGATIVE_ENTRY_TOL = 1e-12

SPECTRUM_CLEARANCE = 1e-6
HYPERBOLICITY_QUAD_TOL = 0.01
HYPERBOLICITY_LOWER = 0.98
HYPERBOLICITY_UPPER_SLACK = 1e-8


@dataclass(frozen=True)
class GeneratorSpec:
    """A square generator and the positivity class verified for it."""

    A: CMatrix
    positivity_class: PositivityClass = GENERAL

    def __post_init__(self):
        a = as_square(self.A)
        if self.positivity_class not in (METZLER, GENERAL):
            raise NumericsError(f"unknown positivity class {self.positivity_class!r}")
        if self.positivity_class == METZLER and not is_metzler(a):
            raise NumericsError("generator is not metzler: it has a negative or complex off-diagonal entry")
        object.__setattr__(self, "A", a)

    @classmethod
    def classify(cls, a: npt.ArrayLike) -> "GeneratorSpec":
        return cls(as_square(a), METZLER if is_metzler(a) else GENERAL)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def is_positive(self) -> bool:
        return self.positivity_class == METZLER


@dataclass(kw_only=True, frozen=True)
class GrowthEstimate:
    samples: list[tuple[float, float]]
    omega_hat: float
    s_value: float
    tolerance: float

    @property
    def consistent(self) -> bool:
        return abs(self.omega_hat - self.s_value) <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "omega_hat": self.omega_hat,
            "s_value": self.s_value,
            "tolerance": self.tolerance,
            "consistent": self.consistent,
            "samples": [list(sample) for sample in self.samples],
        }


def growth_estimate(spec: GeneratorSpec, t_max: float, n_samples: int) -> GrowthEstimate:
    """
    Least-squares slope of log||e^{tA}|| over the upper half of an even t grid.

    When s(A) < 0 the norm is taken as e^{s t} ||e^{t(A - sI)}||, which is the
    same number but cannot underflow to 0 over long horizons.
    """
    if not t_max > 0.0:
        raise NumericsError(f"t_max must be positive, got {t_max}")
    if n_samples < MIN_GROWTH_SAMPLES:
        raise NumericsError(f"n_samples must be at least {MIN_GROWTH_SAMPLES}, got {n_samples}")
    s_value = spectral_bound(spec.A)
    decay = min(s_value, 0.0)
    shifted = spec.A - decay * np.eye(spec.d)
    times = np.linspace(t_max / n_samples, t_max, n_samples)
    logs = []
    for t in times:
        checkpoint()
        norm = op_norm2(expm(shifted, t))
        if norm == 0.0:
            raise NumericsError(f"||e^{{tA}}|| underflows to 0 at t={t:g}; shorten t_max")
        log_norm = decay * t + math.log(norm)
        if log_norm > LOG_NORM_LIMIT:
            raise NumericsError(
                f"log||e^{{tA}}|| = {log_norm:.1f} at t={t:g} overflows; rescale A or shorten t_max"
            )
        logs.append(log_norm)
    tail = slice(n_samples // 2, n_samples)
    slope = float(np.polyfit(times[tail], np.array(logs)[tail], 1)[0])
    return GrowthEstimate(
        samples=[(float(t), v) for t, v in zip(times, logs, strict=True)],
        omega_hat=slope,
        s_value=s_value,
        tolerance=max(GROWTH_TOL, 10.0 / t_max),
    )


def laplace_horizon(spec: GeneratorSpec, lam: complex) -> float:
    """Horizon T with e^{(s(A) - Re lambda) T} = 1e-10."""
    gap = complex(lam).real - spectral_bound(spec.A)
    return math.log(1.0 / LAPLACE_DECAY) / gap


def _check_nonneg_vector(g: npt.ArrayLike, d: int) -> np.ndarray:
    vector = np.asarray(g)
    if np.iscomplexobj(vector) and np.any(vector.imag != 0.0):
        raise NumericsError("g must be a real nonnegative vector")
    vector = vector.real.astype(np.float64)
    if vector.shape != (d,):
        raise NumericsError(f"g of shape {vector.shape} does not match dimension {d}")
    if np.any(vector < 0.0):
        raise NumericsError(f"negative entry {vector.min()!r} in g")
    return vector


def laplace_check(
    spec: GeneratorSpec,
    lam: complex,
    g: npt.ArrayLike,
    T: float | None = None,
    steps: int = LAPLACE_MIN_STEPS,
) -> float:
    """
    Relative error between the trapezoid-Richardson value of
    integral_0^T e^{s(A - lambda)} g ds and (lambda - A)^{-1} g.

    The step count is raised until h ||A - lambda|| <= 0.05.
    """
    if not spec.is_positive:
        raise NumericsError("laplace check needs a metzler generator")
    lam = complex(lam)
    s = spectral_bound(spec.A)
    if lam.real - s < LAPLACE_MARGIN * (1.0 - 1e-9):
        raise NumericsError(
            f"lambda too close to spectral bound: Re(lambda)={lam.real:g}, s(A)={s:g}, need a gap of {LAPLACE_MARGIN}"
        )
    vector = _check_nonneg_vector(g, spec.d)
    needed = laplace_horizon(spec, lam)
    if T is None:
        T = needed
    elif T < needed * (1.0 - 1e-9):
        raise NumericsError(f"horizon T={T:g} is too short; the integrand needs T >= {needed:g}")
    shifted = spec.A - lam * np.eye(spec.d)
    n = max(steps, math.ceil(T * op_norm2(shifted) / LAPLACE_STEP_SCALE))
    n += n % 2
    h = T / n
    step = expm(shifted, h)
    # columns E^r g for r < batch, advanced a whole batch at a time
    block = np.empty((spec.d, LAPLACE_BATCH), dtype=np.complex128)
    block[:, 0] = vector
    for r in range(1, LAPLACE_BATCH):
        block[:, r] = step @ block[:, r - 1]
    jump = np.linalg.matrix_power(step, LAPLACE_BATCH)
    samples = np.empty((n + 1, spec.d), dtype=np.complex128)
    for start in range(0, n + 1, LAPLACE_BATCH):
        checkpoint()
        stop = min(start + LAPLACE_BATCH, n + 1)
        samples[start:stop] = block[:, : stop - start].T
        block = jump @ block
    estimate = trapezoid_richardson(samples, h)
    exact = resolvent_apply(spec.A, lam, vector)
    scale = np.linalg.norm(exact)
    error = float(np.linalg.norm(estimate.value - exact) / scale) if scale > 0.0 else float(np.linalg.norm(estimate.value))
    logger.debug(
        "laplace check at %r: T=%.3g, %d steps, quadrature estimate %.2e, relative error %.2e",
        lam, T, n, estimate.error, error,
    )
    return error


@dataclass(kw_only=True, frozen=True)
class ConvolutionMargin:
    """RHS - LHS of the convolution bound; `tolerance` is the quadrature error estimate of LHS."""

    margin: float
    tolerance: float
    lhs: float
    rhs: float
    points: int

    @property
    def holds(self) -> bool:
        return self.margin >= -self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "margin": self.margin,
            "tolerance": self.tolerance,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "points": self.points,
            "holds": self.holds,
        }


def _snap(x: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    nearest = np.round(x)
    return np.where(np.abs(x - nearest) < GRID_SNAP, nearest, x)


def _negative_inverse(spec: GeneratorSpec) -> tuple[CMatrix, np.ndarray]:
    """-A^{-1} = (0 - A)^{-1}, and its real part cleared of round-off negatives."""
    neg_inv = resolvent_matrix(spec.A, 0.0)
    real = neg_inv.real.copy()
    floor = NEGATIVE_ENTRY_TOL * max(float(np.abs(real).max()), 1.0)
    if np.any(real < -floor):
        raise NumericsError(f"-A^{{-1}} has a negative entry {real.min()!r}; e^{{tA}} is not positive")
    return neg_inv, np.clip(real, 0.0, None)


def convolution_samples(spec: GeneratorSpec, f: StepFunction, N: float, points: int) -> CMatrix:
    """
    u(t_i) = integral_0^N e^{sA} f(t_i - s) ds at the periodic nodes t_i, exactly.

    Summation by parts over the jumps of s -> f(t - s) gives
    A^{-1} [e^{NA} f(t - N) - f(t-) + sum_j sum_m e^{(tau_j + 2pi m) A} J_j]
    where tau_j = (t - b_j) mod 2pi, J_j = values[j] - values[j-1] and only
    jumps with 0 < tau_j + 2pi m < N count.
    """
    if f.d != spec.d:
        raise NumericsError(f"step function has dimension {f.d}, generator has {spec.d}")
    if not N > 0.0:
        raise NumericsError(f"horizon N must be positive, got {N}")
    a = spec.A
    h = TWO_PI / points
    breaks = f.breaks[:-1]
    jumps = f.values - np.roll(f.values, 1, axis=0)
    # positions in units of the grid step
    pos = _snap(breaks / h)
    q = np.ceil(pos).astype(int)
    rho = (q - pos) * h
    span = float(_snap(np.array([N / h]))[0])

    grid_step = expm(a, h)
    powers = np.empty((points, spec.d, spec.d), dtype=np.complex128)
    powers[0] = np.eye(spec.d)
    for k in range(1, points):
        powers[k] = grid_step @ powers[k - 1]
    offsets = np.stack([expm(a, r) for r in rho])

    period = expm(a, TWO_PI)
    laps = math.ceil(N / TWO_PI) + 2
    # cumulative[j, K] = sum_{m < K} e^{2pi m A} J_j
    cumulative = np.zeros((breaks.size, laps + 1, spec.d), dtype=np.complex128)
    term = jumps.T.copy()
    for m in range(laps):
        cumulative[:, m + 1] = cumulative[:, m] + term.T
        term = period @ term

    i = np.arange(points)
    steps_after = np.mod(i[:, None] - q[None, :], points)
    tau_units = steps_after + rho[None, :] / h
    start = (tau_units == 0.0).astype(int)
    end = np.clip(np.ceil(_snap((span - tau_units) / points)).astype(int), 0, laps)
    active = end > start
    jump_rows = np.arange(breaks.size)[None, :]
    summed = np.where(
        active[..., None],
        cumulative[jump_rows, end] - cumulative[jump_rows, start],
        0.0,
    )
    propagators = powers[steps_after] @ offsets[None, :]
    jump_part = np.einsum("ijab,ijb->ia", propagators, summed)

    left_index = np.searchsorted(pos, i, side="left") - 1
    left = f.values[left_index]
    back = np.mod(_snap(i - span), points)
    right_index = np.clip(np.searchsorted(pos, back, side="right") - 1, 0, breaks.size - 1)
    right = f.values[right_index]
    bracket = right @ expm(a, N).T - left + jump_part
    neg_inv = resolvent_matrix(a, 0.0)
    return -(bracket @ neg_inv.T)


def convolution_margin(
    spec: GeneratorSpec,
    f: StepFunction,
    N: float,
    p: float,
    points: int = CONVOLUTION_POINTS,
) -> ConvolutionMargin:
    """
    ||A^{-1}||_p ||f||_{L_p} - (integral_0^{2pi} ||integral_0^N e^{sA} f(t-s) ds||_p^p dt)^{1/p}.

    The outer integral is the periodic trapezoid on 2 * points nodes, checked
    against `points` nodes; the difference is the reported tolerance.
    """
    if not spec.is_positive:
        raise NumericsError("convolution bound needs a metzler generator")
    s = spectral_bound(spec.A)
    if s >= CONVOLUTION_MAX_BOUND:
        raise NumericsError(f"spectral bound must be below {CONVOLUTION_MAX_BOUND}, got s(A)={s:g}")
    if not (math.isfinite(p) and p >= 1.0):
        raise NumericsError(f"p must lie in [1, inf), got {p}")
    if points < 2:
        raise NumericsError(f"points must be at least 2, got {points}")
    u = convolution_samples(spec, f, N, 2 * points)
    pointwise = np.linalg.norm(u, ord=p, axis=1) ** p
    estimate = periodic_richardson(pointwise)
    lhs = float(estimate.value) ** (1.0 / p)
    coarse = max(float(estimate.value) - estimate.error, 0.0) ** (1.0 / p)
    tolerance = max(abs(lhs - coarse), abs((float(estimate.value) + estimate.error) ** (1.0 / p) - lhs))
    _, neg_inv_real = _negative_inverse(spec)
    rhs = pnorm_nonneg(neg_inv_real, p) * f.lp_norm(p)
    margin = rhs - lhs
    logger.debug("convolution margin p=%g: lhs=%.6g rhs=%.6g tol=%.2e", p, lhs, rhs, tolerance)
    return ConvolutionMargin(margin=margin, tolerance=tolerance, lhs=lhs, rhs=rhs, points=2 * points)


@dataclass(kw_only=True, frozen=True)
class HyperbolicityReport:
    c_lower: float | None
    c_exact_p2: float | None
    spectrum_clear: bool
    attained_mode: int | None = None
    tolerance: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "c_lower": self.c_lower,
            "c_exact_p2": self.c_exact_p2,
            "spectrum_clear": self.spectrum_clear,
            "attained_mode": self.attained_mode,
            "tolerance": self.tolerance,
        }


def spectrum_clear(spec: GeneratorSpec, n_modes: int) -> bool:
    """No eigenvalue within 1e-6 of ik for |k| <= n_modes."""
    for mu in eigenvalues(spec.A):
        k = min(max(round(mu.imag), -n_modes), n_modes)
        if abs(mu - 1j * k) < SPECTRUM_CLEARANCE:
            return False
    return True


def default_points(n_modes: int) -> int:
    return max(64, 8 * (2 * n_modes + 1))


def family_ratio(
    spec: GeneratorSpec,
    coefficients: npt.ArrayLike,
    p: float,
    points: int | None = None,
) -> tuple[float, float]:
    """
    (integral ||sum_k (ik - A)^{-1} v_k e^{ikt}||_p^p / integral ||sum_k v_k e^{ikt}||_p^p)^{1/p}
    for coefficients v_{-n}..v_n stored as rows, with its quadrature error estimate.
    """
    v = np.atleast_2d(np.asarray(coefficients, dtype=np.complex128))
    if v.shape[0] % 2 != 1 or v.shape[1] != spec.d:
        raise NumericsError(f"coefficients must have shape (2n + 1, {spec.d}), got {v.shape}")
    n_modes = v.shape[0] // 2
    modes = np.arange(-n_modes, n_modes + 1)
    images = np.stack([resolvent_matrix(spec.A, 1j * k) @ row for k, row in zip(modes, v, strict=True)])
    return _ratio(modes, v, images, p, points or default_points(n_modes))


def _ratio(
    modes: np.ndarray, v: CMatrix, images: CMatrix, p: float, points: int
) -> tuple[float, float]:
    points += points % 2
    waves = np.exp(1j * np.outer(periodic_nodes(points), modes))
    top = np.linalg.norm(waves @ images, ord=p, axis=1) ** p
    bottom = np.linalg.norm(waves @ v, ord=p, axis=1) ** p
    if float(periodic_trapezoid(bottom)) <= 0.0:
        raise NumericsError("coefficient family is zero")
    fine = float(periodic_trapezoid(top) / periodic_trapezoid(bottom)) ** (1.0 / p)
    coarse = float(periodic_trapezoid(top[::2]) / periodic_trapezoid(bottom[::2])) ** (1.0 / p)
    return fine, abs(fine - coarse)


def hyperbolicity_constant(
    spec: GeneratorSpec,
    n_modes: int,
    p: float = 2.0,
    quad: int | None = None,
    trials: int = 16,
    seed: int = 0,
) -> HyperbolicityReport:
    """
    Lower estimate of the smallest c with
    ||sum (ik - A)^{-1} v_k e^{ikt}||_{L_p} <= c ||sum v_k e^{ikt}||_{L_p}.

    Random families are drawn from (seed, family index); the top singular
    vector of the resolvent at the maximizing mode is always tried as well.
    For p = 2 the exact value max_k ||(ik - A)^{-1}|| is reported too.
    """
    if n_modes < 0:
        raise NumericsError(f"n_modes must be nonnegative, got {n_modes}")
    if not (math.isfinite(p) and p >= 1.0):
        raise NumericsError(f"p must lie in [1, inf), got {p}")
    if not spectrum_clear(spec, n_modes):
        logger.info("spectrum of A meets iZ within %g; no constant reported", SPECTRUM_CLEARANCE)
        return HyperbolicityReport(c_lower=None, c_exact_p2=None, spectrum_clear=False)
    modes = np.arange(-n_modes, n_modes + 1)
    resolvents = np.stack([resolvent_matrix(spec.A, 1j * k) for k in modes])
    norms = np.array([op_norm2(r) for r in resolvents])
    best = int(np.argmax(norms))
    points = quad or default_points(n_modes)

    injected = np.zeros((modes.size, spec.d), dtype=np.complex128)
    injected[best] = top_singular_pair(resolvents[best])[1]
    families = [injected]
    for index in range(trials):
        checkpoint()
        rng = trial_rng(seed, index)
        families.append(rng.standard_normal((modes.size, spec.d)) + 1j * rng.standard_normal((modes.size, spec.d)))

    c_lower = 0.0
    error = 0.0
    for v in families:
        checkpoint()
        images = np.einsum("kab,kb->ka", resolvents, v)
        ratio, estimate = _ratio(modes, v, images, p, points)
        if estimate > HYPERBOLICITY_QUAD_TOL * ratio:
            raise QuadratureError(
                f"quadrature grid of {points} points too coarse: error estimate {estimate:.3e} exceeds 1% of ratio {ratio:.6g}; try {2 * points}",
                suggested_points=2 * points,
            )
        if ratio > c_lower:
            c_lower, error = ratio, estimate
    c_exact = float(norms[best]) if p == 2.0 else None
    logger.debug("hyperbolicity constant: c_lower=%.6g, c_exact_p2=%s, mode %d", c_lower, c_exact, modes[best])
    return HyperbolicityReport(
        c_lower=c_lower,
        c_exact_p2=c_exact,
        spectrum_clear=True,
        attained_mode=int(modes[best]),
        tolerance=error,
    )


def rescale_generator(spec: GeneratorSpec, sigma: float) -> GeneratorSpec:
    """A - sigma I; a real shift keeps the positivity class."""
    return GeneratorSpec(spec.A - float(sigma) * np.eye(spec.d), spec.positivity_class)


def rotate_generator(spec: GeneratorSpec, beta: float) -> GeneratorSpec:
    """A - i beta I, which moves the line iZ to i(Z + beta)."""
    if beta == 0.0:
        return spec
    return GeneratorSpec(spec.A - 1j * float(beta) * np.eye(spec.d), GENERAL)


@dataclass(kw_only=True, frozen=True)
class CircleGap:
    """Distance of sigma(A) to a + iR and of sigma(e^{2pi A}) to the circle of radius e^{2pi a}."""

    a: float
    line_distance: float
    circle_distance: float

    @property
    def clear(self) -> bool:
        return self.line_distance > 0.0 and self.circle_distance > 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": self.a,
            "line_distance": self.line_distance,
            "circle_distance": self.circle_distance,
            "clear": self.clear,
        }


def circle_gap(spec: GeneratorSpec, a: float) -> CircleGap:
    """For a matrix both distances vanish together: sigma(e^{2pi A}) = e^{2pi sigma(A)}."""
    real_parts = eigenvalues(spec.A).real
    return CircleGap(
        a=a,
        line_distance=float(np.abs(real_parts - a).min()),
        circle_distance=float(np.abs(np.exp(TWO_PI * real_parts) - math.exp(TWO_PI * a)).min()),
    )


def random_metzler_stable(rng: np.random.Generator, d: int, gap: float = 1.0) -> GeneratorSpec:
    """P - (rho(P) + gap) I with P uniform on [0, 1]^{d x d}, so s(A) = -gap."""
    P = rng.uniform(0.0, 1.0, size=(d, d))
    rho = spectral_bound(P)
    return GeneratorSpec(P - (rho + gap) * np.eye(d), METZLER)


def random_step_function(rng: np.random.Generator, d: int, pieces: int = 8) -> StepFunction:
    inner = np.sort(rng.uniform(0.0, TWO_PI, size=pieces - 1))
    breaks = np.concatenate([[0.0], inner, [TWO_PI]])
    values = rng.standard_normal((pieces, d)) + 1j * rng.standard_normal((pieces, d))
    return StepFunction(breaks, values)


def laplace_suite(trials: int = 100, seed: int = 0) -> InequalityReport:
    """Metzler A = P - (rho(P) + 1) I, Re(lambda) >= s(A) + 0.1; margin is 1e-6 minus the relative error."""
    worst = math.inf
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        checkpoint()
        rng = trial_rng(seed, trial)
        d = int(rng.integers(1, 7))
        spec = random_metzler_stable(rng, d)
        s = spectral_bound(spec.A)
        lam = complex(s + LAPLACE_MARGIN + rng.uniform(0.0, 2.0), rng.uniform(-3.0, 3.0))
        g = rng.uniform(0.0, 1.0, size=d)
        error = laplace_check(spec, lam, g)
        margin = LAPLACE_TOL - error
        if margin < worst:
            worst = margin
            witness = {"trial": trial, "lambda": [lam.real, lam.imag], "A": encode_cmatrix(spec.A)}
        if margin < 0.0:
            violations.append({"check": "laplace", "trial": trial, "value": error, "bound": LAPLACE_TOL})
    logger.info("laplace suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="laplace", trials=trials, seed=seed, worst_margin=worst, witness=witness,
        tolerance=LAPLACE_TOL, violations=violations,
    )


def convolution_suite(trials: int = 100, seed: int = 0, N: float = 40.0) -> InequalityReport:
    """Metzler-stable A of dimension <= 4, random 8-step f, p in {1, 2, 3}."""
    worst = math.inf
    worst_tol = 0.0
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        checkpoint()
        rng = trial_rng(seed, trial)
        d = int(rng.integers(1, 5))
        p = float(rng.choice([1.0, 2.0, 3.0]))
        spec = random_metzler_stable(rng, d, gap=float(rng.uniform(0.1, 1.0)))
        f = random_step_function(rng, d)
        result = convolution_margin(spec, f, N, p)
        if result.margin < worst:
            worst, worst_tol = result.margin, result.tolerance
            witness = {"trial": trial, "p": p, "A": encode_cmatrix(spec.A), **result.to_dict()}
        if not result.holds:
            violations.append(
                {"check": "convolution", "trial": trial, "value": result.margin, "bound": -result.tolerance}
            )
    logger.info("convolution suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="convolution", trials=trials, seed=seed, worst_margin=worst, witness=witness,
        tolerance=worst_tol, violations=violations,
    )


def hyperbolicity_suite(trials: int = 25, seed: int = 0, n_modes: int = 32) -> InequalityReport:
    """p = 2: c_lower / c_exact_p2 must lie in [0.98, 1 + 1e-8]; margin is the distance to that band."""
    worst = math.inf
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    notes: list[str] = []
    for trial in range(trials):
        checkpoint()
        rng = trial_rng(seed, trial)
        d = int(rng.integers(1, 7))
        a = rng.standard_normal((d, d)) / math.sqrt(d) + 0.5 * np.eye(d)
        spec = GeneratorSpec.classify(a)
        report = hyperbolicity_constant(spec, n_modes, 2.0, trials=8, seed=int(rng.integers(2**31)))
        if not report.spectrum_clear:
            notes.append(f"trial {trial}: spectrum meets iZ, skipped")
            continue
        assert report.c_lower is not None and report.c_exact_p2 is not None
        ratio = report.c_lower / report.c_exact_p2
        margin = min(ratio - HYPERBOLICITY_LOWER, 1.0 + HYPERBOLICITY_UPPER_SLACK - ratio)
        if margin < worst:
            worst = margin
            witness = {"trial": trial, "A": encode_cmatrix(spec.A), **report.to_dict()}
        if margin < 0.0:
            violations.append({"check": "hyperbolicity", "trial": trial, "value": ratio, "bound": [HYPERBOLICITY_LOWER, 1.0 + HYPERBOLICITY_UPPER_SLACK]})
    logger.info("hyperbolicity suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="hyperbolicity", trials=trials, seed=seed, worst_margin=worst, witness=witness,
        tolerance=HYPERBOLICITY_UPPER_SLACK, violations=violations, notes=notes,
    )


def growth_suite(
    trials: int = 50, seed: int = 0, t_max: float = 200.0, n_samples: int = 64
) -> InequalityReport:
    """Gaussian A / sqrt(d), d <= 8; margin is the tolerance minus |omega_hat - s(A)|."""
    worst = math.inf
    witness: dict[str, Any] | None = None
    violations: list[dict[str, Any]] = []
    for trial in range(trials):
        checkpoint()
        rng = trial_rng(seed, trial)
        d = int(rng.integers(1, 9))
        spec = GeneratorSpec.classify(rng.standard_normal((d, d)) / math.sqrt(d))
        estimate = growth_estimate(spec, t_max, n_samples)
        margin = estimate.tolerance - abs(estimate.omega_hat - estimate.s_value)
        if margin < worst:
            worst = margin
            witness = {
                "trial": trial,
                "A": encode_cmatrix(spec.A),
                "omega_hat": estimate.omega_hat,
                "s_value": estimate.s_value,
            }
        if margin < 0.0:
            violations.append(
                {"check": "growth", "trial": trial, "value": estimate.omega_hat, "bound": estimate.s_value}
            )
    logger.info("growth suite: %d trials, seed %d, worst margin %.3e", trials, seed, worst)
    return InequalityReport(
        name="growth", trials=trials, seed=seed, worst_margin=worst, witness=witness,
        tolerance=max(GROWTH_TOL, 10.0 / t_max), violations=violations,
    )
