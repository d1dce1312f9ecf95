import cmath
import math

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
from hypothesis import given, strategies as st

from semigroup_dichotomy.dynamics import (
    GENERAL,
    METZLER,
    GeneratorSpec,
    circle_gap,
    convolution_margin,
    convolution_samples,
    convolution_suite,
    family_ratio,
    growth_estimate,
    growth_suite,
    hyperbolicity_constant,
    hyperbolicity_suite,
    laplace_check,
    laplace_horizon,
    laplace_suite,
    random_metzler_stable,
    random_step_function,
    rescale_generator,
    rotate_generator,
)
from semigroup_dichotomy.errors import NumericsError, QuadratureError
from semigroup_dichotomy.lattice import StepFunction
from semigroup_dichotomy.numlin import eigenvalues, op_norm2, resolvent_apply, resolvent_matrix, spectral_bound
from semigroup_dichotomy.quadrature import TWO_PI
from semigroup_dichotomy.shiftblock import make_shift

ROTATION = [[0.0, -1.0], [1.0, 0.0]]


def _convolution_integrand(s: float, t: float, f: StepFunction, part: str) -> float:
    return getattr(cmath.exp(-0.5 * s) * complex(f(t - s)[0]), part)


def _vector_integrand(s: float, t: float, a: np.ndarray, f: StepFunction, j: int, part: str) -> float:
    return getattr((scipy.linalg.expm(s * a) @ f(t - s))[j], part)


@pytest.fixture
def stable():
    return GeneratorSpec.classify(make_shift(2) - 2.0 * np.eye(2))


def test_classify():
    assert GeneratorSpec.classify([[-1.0, 2.0], [0.5, -3.0]]).positivity_class == METZLER
    assert GeneratorSpec.classify(ROTATION).positivity_class == GENERAL
    assert GeneratorSpec.classify([[-1.0]]).is_positive


def test_claimed_metzler_class_is_checked():
    with pytest.raises(NumericsError, match="not metzler"):
        GeneratorSpec(np.array(ROTATION, dtype=complex), METZLER)
    with pytest.raises(NumericsError, match="must be square"):
        GeneratorSpec(np.ones((2, 3), dtype=complex))


def test_growth_of_a_decaying_scalar():
    estimate = growth_estimate(GeneratorSpec.classify([[-1.0]]), 200.0, 64)
    assert estimate.s_value == pytest.approx(-1.0)
    assert estimate.omega_hat == pytest.approx(-1.0, abs=1e-9)
    assert estimate.consistent


def test_growth_of_a_nilpotent_block_is_polynomial():
    estimate = growth_estimate(GeneratorSpec.classify(make_shift(4)), 200.0, 64)
    assert estimate.s_value == pytest.approx(0.0, abs=1e-12)
    assert 0.0 < estimate.omega_hat < estimate.tolerance
    assert estimate.consistent
    assert len(estimate.samples) == 64


def test_growth_of_a_jordan_block():
    estimate = growth_estimate(GeneratorSpec.classify(4.0 * np.eye(2) + make_shift(2)), 50.0, 32)
    assert estimate.s_value == pytest.approx(4.0)
    assert estimate.omega_hat == pytest.approx(4.0, abs=0.05)
    assert estimate.tolerance == pytest.approx(0.2)
    assert estimate.to_dict()["consistent"] is True


def test_growth_arguments_and_overflow():
    spec = GeneratorSpec.classify([[-1.0]])
    with pytest.raises(NumericsError, match="t_max must be positive"):
        growth_estimate(spec, 0.0, 64)
    with pytest.raises(NumericsError, match="at least 8"):
        growth_estimate(spec, 10.0, 4)
    with pytest.raises(NumericsError, match="overflows; rescale A"):
        growth_estimate(GeneratorSpec.classify([[1.0]]), 705.0, 8)
    with pytest.raises(NumericsError, match="matrix exponential overflow"):
        growth_estimate(GeneratorSpec.classify([[10.0]]), 100.0, 16)


@pytest.mark.parametrize(
    ("matrix", "rate"), [([[-5.0]], -5.0), ([[-10.0, 5.0], [5.0, -10.0]], -5.0), ([[-3.0, 1.0], [0.0, -4.0]], -3.0)]
)
def test_growth_over_horizons_where_the_exponential_underflows(matrix, rate):
    estimate = growth_estimate(GeneratorSpec.classify(matrix), 200.0, 64)
    assert estimate.s_value == pytest.approx(rate)
    assert estimate.omega_hat == pytest.approx(rate, abs=1e-6)
    assert estimate.consistent
    assert estimate.samples[-1][1] == pytest.approx(200.0 * rate, abs=1.0)


def test_laplace_scalar():
    assert laplace_check(GeneratorSpec.classify([[-2.0]]), 0.0, [1.0]) <= 1e-6


def test_laplace_shifted_shift_block(stable):
    assert np.allclose(resolvent_apply(stable.A, 0.0, [1.0, 1.0]), [0.75, 0.5])
    assert laplace_check(stable, 0.0, [1.0, 1.0]) <= 1e-6


def test_laplace_complex_lambda(stable):
    assert laplace_check(stable, complex(-1.5, 2.0), [0.0, 2.0]) <= 1e-6


def test_laplace_horizon(stable):
    assert laplace_horizon(stable, 0.0) == pytest.approx(math.log(1e10) / 2.0)


def test_laplace_preconditions(stable):
    with pytest.raises(NumericsError, match="too close to spectral bound"):
        laplace_check(stable, -2.0 + 0.05, [1.0, 1.0])
    with pytest.raises(NumericsError, match="needs a metzler generator"):
        laplace_check(GeneratorSpec.classify(ROTATION), 1.0, [1.0, 1.0])
    with pytest.raises(NumericsError, match="negative entry"):
        laplace_check(stable, 0.0, [1.0, -1.0])
    with pytest.raises(NumericsError, match="too short"):
        laplace_check(stable, 0.0, [1.0, 1.0], T=1.0)


def test_convolution_samples_against_adaptive_quadrature():
    spec = GeneratorSpec.classify([[-0.5]])
    f = StepFunction([0.0, 1.0, 4.0, TWO_PI], [[1.0], [-2.0 + 1j], [0.5]])
    N, points = 10.0, 16
    u = convolution_samples(spec, f, N, points)
    for i, t in enumerate(np.arange(points) * TWO_PI / points):
        jumps = {t - b - TWO_PI * m for b in f.breaks[:-1] for m in range(-1, 4)}
        inside = sorted(s for s in jumps if 0.0 < s < N)
        for part in ("real", "imag"):
            expected, _ = scipy.integrate.quad(
                _convolution_integrand, 0.0, N, args=(t, f, part), points=inside or None, limit=200, epsabs=1e-13, epsrel=1e-12
            )
            assert getattr(u[i, 0], part) == pytest.approx(expected, abs=1e-10)


def test_vector_convolution_samples_against_adaptive_quadrature(stable):
    f = StepFunction([0.0, 2.0, 5.0, TWO_PI], [[1.0, 0.0], [-0.5j, 2.0], [0.25, -1.0 + 1j]])
    N, points = 8.0, 8
    u = convolution_samples(stable, f, N, points)
    assert u.shape == (points, 2)
    for i, t in enumerate(np.arange(points) * TWO_PI / points):
        jumps = {t - b - TWO_PI * m for b in f.breaks[:-1] for m in range(-1, 3)}
        inside = sorted(s for s in jumps if 0.0 < s < N)
        for j in range(2):
            for part in ("real", "imag"):
                expected, _ = scipy.integrate.quad(
                    _vector_integrand,
                    0.0,
                    N,
                    args=(t, stable.A, f, j, part),
                    points=inside or None,
                    limit=200,
                    epsabs=1e-12,
                    epsrel=1e-11,
                )
                assert getattr(u[i, j], part) == pytest.approx(expected, abs=1e-9)


@given(seed=st.integers(min_value=0, max_value=2**31 - 1), sigma=st.floats(min_value=0.1, max_value=3.0))
def test_convolution_bound_survives_rescaling(seed, sigma):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    spec = random_metzler_stable(rng, d, gap=0.5)
    step = random_step_function(rng, d)
    f = StepFunction(step.breaks, np.abs(step.values))
    base = convolution_margin(spec, f, 30.0, 2.0)
    scaled = convolution_margin(rescale_generator(spec, sigma), f, 30.0, 2.0)
    assert base.holds
    assert scaled.holds
    # both sides shrink: e^{s(A - sigma I)} = e^{-sigma s} e^{sA} is entrywise smaller
    assert scaled.rhs <= base.rhs * (1.0 + 1e-12)
    assert scaled.lhs <= base.lhs + base.tolerance + scaled.tolerance


def test_convolution_scalar_sanity_case():
    result = convolution_margin(GeneratorSpec.classify([[-1.0]]), StepFunction.constant([1.0]), 20.0, 2.0)
    assert result.margin >= 0.0
    assert result.rhs == pytest.approx(math.sqrt(TWO_PI))
    assert result.lhs == pytest.approx(math.sqrt(TWO_PI) * (1 - math.exp(-20.0)))
    assert result.holds


def test_convolution_of_zero_has_zero_margin():
    result = convolution_margin(GeneratorSpec.classify([[-1.0]]), StepFunction.constant([0.0]), 20.0, 3.0)
    assert result.margin == 0.0


@given(seed=st.integers(min_value=0, max_value=2**31 - 1), p=st.sampled_from([1.0, 2.0, 3.0]))
def test_convolution_margin_within_quadrature_tolerance(seed, p):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    spec = random_metzler_stable(rng, d, gap=0.5)
    result = convolution_margin(spec, random_step_function(rng, d), 30.0, p)
    assert result.margin >= -result.tolerance


def test_convolution_preconditions(stable):
    f = StepFunction.constant([1.0, 1.0])
    with pytest.raises(NumericsError, match="spectral bound must be below"):
        convolution_margin(GeneratorSpec.classify(make_shift(2) - 0.01 * np.eye(2)), f, 10.0, 2.0)
    with pytest.raises(NumericsError, match="needs a metzler generator"):
        convolution_margin(GeneratorSpec.classify([[-1.0, -1.0], [0.0, -1.0]]), f, 10.0, 2.0)
    with pytest.raises(NumericsError, match="dimension"):
        convolution_margin(stable, StepFunction.constant([1.0]), 10.0, 2.0)
    with pytest.raises(NumericsError, match="horizon N must be positive"):
        convolution_margin(stable, f, 0.0, 2.0)


def test_hyperbolicity_of_a_decaying_scalar():
    report = hyperbolicity_constant(GeneratorSpec.classify([[-1.0]]), 8)
    assert report.spectrum_clear
    assert report.c_exact_p2 == pytest.approx(1.0)
    assert report.attained_mode == 0
    assert 0.98 * report.c_exact_p2 <= report.c_lower <= report.c_exact_p2 * (1 + 1e-8)


def test_hyperbolicity_needs_a_clear_spectrum():
    report = hyperbolicity_constant(GeneratorSpec.classify(ROTATION), 4)
    assert not report.spectrum_clear
    assert report.c_lower is None
    assert report.c_exact_p2 is None


def test_single_mode_ratio_is_the_resolvent_image(stable):
    coefficients = np.zeros((9, 2), dtype=complex)
    coefficients[6] = [0.0, 1.0]
    ratio, error = family_ratio(stable, coefficients, 2.0)
    expected = np.linalg.norm(resolvent_matrix(stable.A, 2j) @ [0.0, 1.0])
    assert ratio == pytest.approx(expected, rel=1e-12)
    assert error == pytest.approx(0.0, abs=1e-12)
    assert ratio <= hyperbolicity_constant(stable, 4).c_exact_p2


def test_family_ratio_rejects_bad_families(stable):
    with pytest.raises(NumericsError, match="coefficients must have shape"):
        family_ratio(stable, np.ones((4, 2)), 2.0)
    with pytest.raises(NumericsError, match="family is zero"):
        family_ratio(stable, np.zeros((3, 2)), 2.0)


def test_exact_constant_grows_then_settles_with_modes():
    spec = GeneratorSpec.classify([[-0.2, 3.0], [-3.0, -0.2]])
    values = [hyperbolicity_constant(spec, n).c_exact_p2 for n in (1, 2, 4, 8, 16)]
    assert values == sorted(values)
    assert values[-1] == pytest.approx(values[-2])
    assert values[-1] == pytest.approx(5.0)


def test_hyperbolicity_for_p_three_is_reported_without_exact_value(stable):
    report = hyperbolicity_constant(stable, 4, p=3.0)
    assert report.c_exact_p2 is None
    assert report.c_lower > 0.0


def test_coarse_grid_raises_with_suggestion():
    with pytest.raises(QuadratureError) as excinfo:
        hyperbolicity_constant(GeneratorSpec.classify([[-0.1]]), 8, quad=4)
    assert excinfo.value.suggested_points == 8


def test_rescale_and_rotate(stable):
    shifted = rescale_generator(stable, 1.0)
    assert shifted.positivity_class == METZLER
    assert spectral_bound(shifted.A) == pytest.approx(-3.0)
    rotated = rotate_generator(stable, 0.5)
    assert rotated.positivity_class == GENERAL
    assert np.allclose(eigenvalues(rotated.A), -2.0 - 0.5j)
    assert rotate_generator(stable, 0.0) is stable


def test_circle_gap_of_a_finite_block():
    M, n = 5, 1
    block = GeneratorSpec(1j * n * M * np.eye(M) + make_shift(M))
    gap = circle_gap(block, 1.0)
    assert gap.line_distance == pytest.approx(1.0)
    assert gap.circle_distance == pytest.approx(math.exp(TWO_PI) - 1.0)
    assert gap.clear
    touching = circle_gap(GeneratorSpec.classify(np.diag([1.0, -1.0])), 1.0)
    assert not touching.clear


def test_random_metzler_stable_has_the_requested_gap(rng):
    spec = random_metzler_stable(rng, 4, gap=0.3)
    assert spec.is_positive
    assert spectral_bound(spec.A) == pytest.approx(-0.3, abs=1e-9)
    assert op_norm2(spec.A) > 0.0


def test_laplace_suite():
    report = laplace_suite(trials=100, seed=0)
    assert report
    assert report.worst_margin >= 0.0


def test_convolution_suite():
    report = convolution_suite(trials=100, seed=0)
    assert report
    assert report.to_dict()["check"] == "convolution"


def test_hyperbolicity_suite():
    report = hyperbolicity_suite(trials=25, seed=0)
    assert report
    assert report.worst_margin >= 0.0


def test_growth_suite():
    report = growth_suite(trials=50, seed=0)
    assert report
    assert report.worst_margin >= 0.0
