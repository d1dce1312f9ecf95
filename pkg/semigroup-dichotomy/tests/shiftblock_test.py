import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from semigroup_dichotomy.errors import NumericsError, SpectrumError
from semigroup_dichotomy.numlin import op_norm2, resolvent_apply
from semigroup_dichotomy.shiftblock import (
    ShiftBlock,
    make_shift,
    shift_bounds_report,
    shift_exp,
    shift_norm_bound,
    shift_resolvent,
)

block_sizes = st.integers(min_value=1, max_value=24)


@pytest.mark.parametrize("M", [0, -3, 2.5])
def test_block_dimension_must_be_positive_integer(M):
    with pytest.raises(NumericsError, match="positive integer"):
        ShiftBlock(M)


def test_make_shift_small_blocks():
    assert np.array_equal(make_shift(1), [[0.0]])
    assert np.array_equal(make_shift(3), [[0, 1, 0], [0, 0, 1], [0, 0, 0]])


@given(M=st.integers(min_value=2, max_value=24))
def test_shift_has_unit_norm(M):
    assert op_norm2(make_shift(M)) == pytest.approx(1.0, abs=1e-12)


def test_shift_resolvent_closed_forms():
    assert np.allclose(shift_resolvent(2, 1.0), [[1.0, 1.0], [0.0, 1.0]], atol=0)
    r = shift_resolvent(3, 2.0)
    assert np.allclose(r, [[0.5, 0.25, 0.125], [0.0, 0.5, 0.25], [0.0, 0.0, 0.5]], atol=0)
    assert shift_resolvent(1, 1j)[0, 0] == pytest.approx(-1j)


def test_shift_resolvent_at_zero_raises():
    with pytest.raises(SpectrumError, match="lambda must be nonzero"):
        shift_resolvent(4, 0.0)


def test_shift_resolvent_overflow_is_reported():
    with pytest.raises(NumericsError, match="overflows"):
        shift_resolvent(400, 1e-3)


@given(M=block_sizes, re=st.floats(-3, 3), im=st.floats(-3, 3))
def test_shift_resolvent_inverts(M, re, im):
    lam = complex(re, im)
    if abs(lam) < 0.5:
        lam += 1.0
    r = shift_resolvent(M, lam)
    assert np.allclose(r @ (lam * np.eye(M) - make_shift(M)), np.eye(M), atol=1e-9 * max(1.0, abs(r).max()))


def test_shift_exp_closed_forms():
    assert np.array_equal(shift_exp(3, 0.0), np.eye(3))
    assert np.allclose(shift_exp(3, 1.0), [[1.0, 1.0, 0.5], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]], atol=0)
    assert shift_exp(4, 2.0)[0, 3] == pytest.approx(4.0 / 3.0, rel=1e-15)


@given(M=block_sizes, t=st.floats(0.0, 4.0))
def test_shift_exp_matches_scipy(M, t):
    assert np.allclose(shift_exp(M, t), scipy.linalg.expm(t * make_shift(M)), rtol=1e-12, atol=1e-14)


def test_unit_circle_lower_bound():
    report = shift_bounds_report(16, cmath.exp(1j * math.pi / 3))
    assert report.lower == pytest.approx(4.0)
    assert report.upper is None
    assert report.norm >= 4.0
    assert report


def test_outside_disk_upper_bound():
    report = shift_bounds_report(10, 3.0)
    assert report.upper == pytest.approx(0.5)
    assert report.lower is None
    assert report.norm <= 0.5
    assert not report.violations


def test_jordan_resolvent_norm_is_golden_ratio():
    report = shift_bounds_report(2, 1.0)
    assert report.norm == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-12)
    assert report.lower == pytest.approx(math.sqrt(2))


@given(M=block_sizes, angle=st.floats(0.0, 2 * math.pi))
def test_unit_circle_bound_for_every_angle(M, angle):
    assert shift_bounds_report(M, cmath.exp(1j * angle))


@given(M=block_sizes, modulus=st.floats(1.01, 50.0), angle=st.floats(0.0, 2 * math.pi))
def test_geometric_bound_outside_unit_disk(M, modulus, angle):
    assert shift_bounds_report(M, modulus * cmath.exp(1j * angle))


def test_norm_bound_closed_form():
    assert shift_norm_bound(5, 1.0) == 5.0
    assert shift_norm_bound(3, 2.0) == pytest.approx(0.5 + 0.25 + 0.125)
    assert shift_norm_bound(3, 0.0) == math.inf
    assert shift_norm_bound(2000, 1e-3) == math.inf


@given(M=block_sizes, modulus=st.floats(0.3, 20.0))
def test_norm_bound_dominates_norm(M, modulus):
    norm = op_norm2(shift_resolvent(M, modulus))
    assert norm <= shift_norm_bound(M, modulus) * (1 + 1e-9)


ACCEPTANCE_SIZES = [2, 4, 8, 16, 32, 64, 128]


@pytest.mark.parametrize("M", ACCEPTANCE_SIZES)
def test_unit_circle_lower_bound_on_32_points(M):
    for lam in np.exp(2j * np.pi * np.arange(32) / 32):
        assert op_norm2(shift_resolvent(M, lam)) >= math.sqrt(M) - 1e-9


@pytest.mark.parametrize("M", ACCEPTANCE_SIZES)
@pytest.mark.parametrize("modulus", [1.5, 2.0, 3.0])
def test_geometric_upper_bound_on_circles(M, modulus):
    for lam in modulus * np.exp(2j * np.pi * np.arange(32) / 32):
        norm = op_norm2(shift_resolvent(M, lam))
        assert norm <= 1.0 / (modulus - 1.0) + 1e-9
        if modulus == 2.0:
            assert norm <= 1.0 + 1e-9


@pytest.mark.parametrize("M", [1, 4, 16, 32])
@pytest.mark.parametrize("t", [0.25, 0.5, 1.0, 2.0, 3.0])
def test_exp_norm_below_e_to_the_t(M, t):
    assert op_norm2(shift_exp(M, t)) <= math.exp(t) + 1e-9


@given(
    M=st.integers(min_value=1, max_value=32),
    s=st.floats(min_value=0.0, max_value=4.0),
    t=st.floats(min_value=0.0, max_value=4.0),
)
def test_exp_semigroup_law(M, s, t):
    product = shift_exp(M, t) @ shift_exp(M, s)
    assert np.allclose(product, shift_exp(M, s + t), rtol=0.0, atol=1e-12 * math.exp(s + t))


@given(
    M=block_sizes,
    modulus=st.floats(min_value=1.2, max_value=3.0),
    angle=st.floats(min_value=0.0, max_value=2 * math.pi),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
def test_resolvent_agrees_with_linear_solve(M, modulus, angle, seed):
    rng = np.random.default_rng(seed)
    lam = cmath.rect(modulus, angle)
    g = rng.standard_normal(M) + 1j * rng.standard_normal(M)
    expected = resolvent_apply(make_shift(M), lam, g)
    assert np.linalg.norm(shift_resolvent(M, lam) @ g - expected) <= 1e-10 * np.linalg.norm(expected)
