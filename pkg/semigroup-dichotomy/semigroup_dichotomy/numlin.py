"""
Dense complex linear algebra primitives.

Matrices are numpy arrays of dtype complex128 (``CMatrix``). Nonnegative
matrices are float64 arrays accepted by :func:`as_nonneg`. Every routine is a
pure function of its inputs and deterministic for fixed inputs.
"""

import logging
import math

import numpy as np
import numpy.typing as npt

from .cancellation import checkpoint
from .errors import ConvergenceError, NumericsError, SpectrumError

logger = logging.getLogger(__name__)

CMatrix = npt.NDArray[np.complex128]
CVector = npt.NDArray[np.complex128]
NonnegMatrix = npt.NDArray[np.float64]

POWER_TOL = 1e-13
POWER_MAX_ITER = 10_000
MAX_SQUARINGS = 16
TAYLOR_ORDER = 16
SCALED_NORM_TARGET = 0.5
COND_LIMIT = 1e14
EXP_SAFE_EXPONENT = 700.0
EIGEN_MAX_DIM = 64
QR_SWEEPS_PER_EIGENVALUE = 60
BOYD_TOL = 1e-13
BOYD_MAX_ITER = 10_000

_EPS = float(np.finfo(np.float64).eps)


def as_cmatrix(a: npt.ArrayLike) -> CMatrix:
    """Validate `a` as a finite 2-d array and return it as complex128."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NumericsError(f"expected a 2-d matrix, got shape {m.shape}")
    if m.size == 0:
        raise NumericsError("empty matrix")
    if not np.all(np.isfinite(m)):
        raise NumericsError("matrix has non-finite entries")
    return m


def as_square(a: npt.ArrayLike) -> CMatrix:
    m = as_cmatrix(a)
    if m.shape[0] != m.shape[1]:
        raise NumericsError(f"matrix must be square, got shape {m.shape}")
    return m


def as_nonneg(p: npt.ArrayLike) -> NonnegMatrix:
    """Validate a square, real, entrywise nonnegative matrix."""
    m = as_square(p)
    if np.any(m.imag != 0.0):
        raise NumericsError("nonnegative matrix must be real")
    real = m.real.copy()
    if np.any(real < 0.0):
        raise NumericsError(f"negative entry {real.min()!r} in nonnegative matrix")
    return real


def is_metzler(a: npt.ArrayLike) -> bool:
    """True when `a` is real with nonnegative off-diagonal entries."""
    m = as_square(a)
    if np.any(m.imag != 0.0):
        return False
    off = m.real - np.diag(np.diag(m.real))
    return bool(np.all(off >= 0.0))


def _accelerator(normal: CMatrix) -> CMatrix:
    """A high power of A*A, rescaled after every squaring."""
    n = normal.shape[0]
    accel = normal
    squarings = min(MAX_SQUARINGS, max(1, math.ceil(math.log2(n * n + 1))))
    for _ in range(squarings):
        peak = np.abs(accel).max()
        if peak == 0.0:
            break
        accel = accel / peak
        accel = accel @ accel
    return accel


def _power_iteration(
    normal: CMatrix, accel: CMatrix, a: CMatrix, x0: CVector
) -> tuple[float, CVector]:
    """Rayleigh-quotient power iteration on `normal` = A*A, starting from accel @ x0."""
    # The Rayleigh quotient is always taken with A itself.
    x = accel @ x0 if np.abs(accel).max() > 0.0 else x0
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return 0.0, x0 / np.linalg.norm(x0)
    x = x / nx
    previous = -1.0
    for iteration in range(1, POWER_MAX_ITER + 1):
        checkpoint()
        ax = a @ x
        rayleigh = float(np.vdot(ax, ax).real)
        z = normal @ x
        nz = np.linalg.norm(z)
        if nz == 0.0 or abs(rayleigh - previous) <= POWER_TOL * rayleigh:
            logger.debug("power iteration converged after %d steps", iteration)
            return rayleigh, x
        previous = rayleigh
        x = z / nz
    raise ConvergenceError(
        f"power iteration did not converge in {POWER_MAX_ITER} steps", iterate=x
    )


def top_singular_pair(a: npt.ArrayLike) -> tuple[float, CVector]:
    """
    Largest singular value of `a` and a unit right singular vector.

    Power iteration on A*A from the normalized all-ones vector; a fixed-seed
    Gaussian start is run as well and the larger Rayleigh quotient kept, so an
    all-ones start orthogonal to the top singular subspace cannot go unnoticed.
    The matrix is divided by its largest entry modulus first so A*A cannot
    overflow. Real and imaginary parts are divided separately, since complex
    division by a subnormal scale yields NaN.
    """
    m = as_cmatrix(a)
    n = m.shape[1]
    ones = np.ones(n, dtype=np.complex128) / math.sqrt(n)
    scale = float(np.abs(m).max())
    if scale == 0.0:
        return 0.0, ones
    m = m.real / scale + 1j * (m.imag / scale)
    normal = m.conj().T @ m
    rng = np.random.default_rng(0)
    fallback = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    accel = _accelerator(normal)
    best_rq, best_x = _power_iteration(normal, accel, m, ones)
    rq, x = _power_iteration(normal, accel, m, fallback.astype(np.complex128))
    if rq > best_rq:
        best_rq, best_x = rq, x
    return scale * math.sqrt(max(best_rq, 0.0)), best_x


def op_norm2(a: npt.ArrayLike) -> float:
    """Operator norm on l_2 (largest singular value)."""
    return top_singular_pair(a)[0]


def _nilpotent_taylor(x: CMatrix) -> CMatrix:
    """Exact exponential of a nilpotent matrix: the Taylor series stops at n - 1."""
    n = x.shape[0]
    total = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, n):
        term = term @ x / k
        if not np.any(term):
            break
        total = total + term
    return total


def _scaled_taylor(x: CMatrix) -> CMatrix:
    n = x.shape[0]
    norm1 = float(np.linalg.norm(x, 1))
    squarings = 0
    if norm1 > SCALED_NORM_TARGET:
        squarings = math.ceil(math.log2(norm1 / SCALED_NORM_TARGET))
    y = x / (2.0**squarings)
    total = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, TAYLOR_ORDER + 1):
        term = term @ y / k
        total = total + term
    for _ in range(squarings):
        total = total @ total
    logger.debug("expm: ||tA||_1=%.3e, %d squarings", norm1, squarings)
    return total


def _triangular_constant_diagonal(a: CMatrix) -> complex | None:
    """Return the diagonal value if `a` is triangular with a constant diagonal."""
    diag = np.diag(a)
    if not np.all(diag == diag[0]):
        return None
    if np.any(np.tril(a, -1)) and np.any(np.triu(a, 1)):
        return None
    return complex(diag[0])


def expm(a: npt.ArrayLike, t: float = 1.0) -> CMatrix:
    """
    Matrix exponential e^{tA}.

    Triangular matrices with a constant diagonal c (nilpotent ones included)
    use the exact finite sum e^{ct} * sum_k (t(A - cI))^k / k!. Metzler
    matrices are shifted to a nonnegative matrix first, so for t >= 0 every
    Taylor term and every squaring stays entrywise nonnegative; when the
    shifted exponential could overflow (t * ||A + sI||_1 > 700) the unshifted
    series is used and its round-off negatives are clipped to 0. Everything
    else goes through scaling and squaring with a degree-16 Taylor polynomial.
    """
    m = as_square(a)
    n = m.shape[0]
    t = float(t)
    diagonal = _triangular_constant_diagonal(m)
    if diagonal is not None:
        nilpotent = t * (m - diagonal * np.eye(n))
        result = np.exp(diagonal * t) * _nilpotent_taylor(nilpotent)
    elif t >= 0.0 and is_metzler(m):
        shift = max(0.0, -float(np.diag(m).real.min()))
        shifted = t * (m + shift * np.eye(n))
        if float(np.linalg.norm(shifted, 1)) <= EXP_SAFE_EXPONENT:
            result = math.exp(-shift * t) * _scaled_taylor(shifted)
        else:
            result = np.maximum(_scaled_taylor(t * m).real, 0.0).astype(np.complex128)
    else:
        result = _scaled_taylor(t * m)
    if not np.all(np.isfinite(result)):
        raise NumericsError(f"matrix exponential overflow at t={t}")
    return result


def _check_conditioning(shifted: CMatrix, lam: complex) -> None:
    cond = np.linalg.cond(shifted)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise SpectrumError(
            f"lambda in or near spectrum: lambda={lam!r}, condition estimate {cond:.3e}"
        )


def resolvent_apply(a: npt.ArrayLike, lam: complex, g: npt.ArrayLike) -> CVector:
    """Solve (lambda I - A) x = g."""
    m = as_square(a)
    rhs = np.asarray(g, dtype=np.complex128)
    if rhs.shape != (m.shape[0],):
        raise NumericsError(
            f"vector of shape {rhs.shape} does not match matrix of shape {m.shape}"
        )
    shifted = complex(lam) * np.eye(m.shape[0]) - m
    _check_conditioning(shifted, lam)
    return np.linalg.solve(shifted, rhs)


def resolvent_matrix(a: npt.ArrayLike, lam: complex) -> CMatrix:
    """The matrix (lambda I - A)^{-1}."""
    m = as_square(a)
    shifted = complex(lam) * np.eye(m.shape[0]) - m
    _check_conditioning(shifted, lam)
    return np.linalg.solve(shifted, np.eye(m.shape[0], dtype=np.complex128))


def _hessenberg(a: CMatrix) -> CMatrix:
    """Unitary similarity to upper Hessenberg form by Householder reflections."""
    h = a.copy()
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        h[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ v, v.conj())
        h[k + 2 :, k] = 0.0
    return h


def _wilkinson_shift(h: CMatrix, hi: int) -> complex:
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    mean = (a + d) / 2.0
    disc = np.sqrt(((a - d) / 2.0) ** 2 + b * c)
    first, second = mean + disc, mean - disc
    return complex(first if abs(first - d) <= abs(second - d) else second)


def _qr_step(h: CMatrix, lo: int, hi: int, mu: complex) -> None:
    """One explicitly shifted QR step on the active window h[lo:hi+1, lo:hi+1]."""
    block = h[lo : hi + 1, lo : hi + 1]
    m = block.shape[0]
    idx = np.arange(m)
    block[idx, idx] -= mu
    rotations: list[tuple[complex, complex]] = []
    for k in range(m - 1):
        x, y = block[k, k], block[k + 1, k]
        r = math.hypot(abs(x), abs(y))
        c, s = (complex(x / r), complex(y / r)) if r > 0.0 else (1.0 + 0j, 0j)
        upper = block[k, k:].copy()
        lower = block[k + 1, k:].copy()
        block[k, k:] = c.conjugate() * upper + s.conjugate() * lower
        block[k + 1, k:] = -s * upper + c * lower
        rotations.append((c, s))
    for k, (c, s) in enumerate(rotations):
        top = min(k + 2, m)
        left = block[:top, k].copy()
        right = block[:top, k + 1].copy()
        block[:top, k] = c * left + s * right
        block[:top, k + 1] = -s.conjugate() * left + c.conjugate() * right
    block[idx, idx] += mu


def eigenvalues(a: npt.ArrayLike) -> CVector:
    """
    Eigenvalues by complex Schur reduction: Hessenberg form, then shifted QR
    with Wilkinson shifts and deflation. Limited to dimension <= 64, except
    for triangular matrices, whose diagonal is returned as is.
    """
    m = as_square(a)
    n = m.shape[0]
    if not np.any(np.tril(m, -1)) or not np.any(np.triu(m, 1)):
        return np.diag(m).copy()
    if n > EIGEN_MAX_DIM:
        raise NumericsError(f"eigenvalues limited to dimension <= {EIGEN_MAX_DIM}, got {n}")
    h = _hessenberg(m)
    scale = max(float(np.abs(h).max()), np.finfo(np.float64).tiny)
    result = np.empty(n, dtype=np.complex128)
    cap = QR_SWEEPS_PER_EIGENVALUE * n
    sweeps = 0
    since_deflation = 0
    hi = n - 1
    while hi >= 0:
        lo = hi
        while lo > 0:
            off = abs(h[lo, lo - 1])
            local = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if off <= _EPS * local or off <= _EPS * scale:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            result[hi] = h[hi, hi]
            hi -= 1
            since_deflation = 0
            continue
        if sweeps >= cap:
            subdiagonal = [float(abs(h[i, i - 1])) for i in range(1, n)]
            raise ConvergenceError(
                f"QR iteration did not converge after {cap} sweeps; "
                f"subdiagonal magnitudes {subdiagonal}",
                iterate=h.copy(),
            )
        sweeps += 1
        checkpoint()
        since_deflation += 1
        if since_deflation % 11 == 0:
            mu = complex(h[hi, hi] + 0.75 * abs(h[hi, hi - 1]))
        else:
            mu = _wilkinson_shift(h, hi)
        _qr_step(h, lo, hi, mu)
    logger.debug("eigenvalues: n=%d converged in %d QR sweeps", n, sweeps)
    return result


def spectral_bound(a: npt.ArrayLike) -> float:
    """s(A) = max Re(sigma(A))."""
    return float(eigenvalues(a).real.max())


def pnorm_nonneg(p_matrix: npt.ArrayLike, p: float) -> float:
    """
    Operator norm of a nonnegative matrix on l_p, 1 <= p < inf.

    p = 1 is the maximal column sum and p = 2 is :func:`op_norm2`; other p use
    Boyd's nonlinear power method x <- (P^T (P x)^{p-1})^{q-1} from a positive
    start, whose estimates ||Px||_p / ||x||_p increase monotonically.
    """
    if not math.isfinite(p) or p < 1.0:
        raise NumericsError(f"p must lie in [1, inf), got {p}")
    mat = as_nonneg(p_matrix)
    if p == 1.0:
        return float(mat.sum(axis=0).max())
    if p == 2.0:
        return op_norm2(mat)
    q_minus_one = 1.0 / (p - 1.0)
    x = np.ones(mat.shape[1])
    x /= np.linalg.norm(x, p)
    best = float(np.linalg.norm(mat @ x, p))
    for iteration in range(1, BOYD_MAX_ITER + 1):
        checkpoint()
        y = mat @ x
        w = mat.T @ y ** (p - 1.0)
        if not np.any(w):
            return best
        x = w**q_minus_one
        x /= np.linalg.norm(x, p)
        estimate = float(np.linalg.norm(mat @ x, p))
        if abs(estimate - best) <= BOYD_TOL * max(estimate, best):
            logger.debug("Boyd power method (p=%g) converged after %d steps", p, iteration)
            return max(estimate, best)
        best = max(estimate, best)
    raise ConvergenceError(
        f"Boyd power method did not converge in {BOYD_MAX_ITER} steps (p={p})", iterate=x
    )
