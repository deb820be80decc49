import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from openxxz.errors import DimensionError, NoAsymptoticTermError
from openxxz.laurent import (LaurentMatrix, LaurentPoly, check_degree_bounds, lp_d_lambda, lp_eval,
                             lp_leading)

coef = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
polys = st.dictionaries(st.integers(-4, 4), coef, max_size=5).map(LaurentPoly)
lams = st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False)


def test_sinh_cosh_match_cmath():
    for lam in (0.3, -0.7 + 0.2j, 1.1j):
        assert abs(LaurentPoly.sinh(2, 0.4j)(lam) - cmath.sinh(2 * lam + 0.4j)) < 1e-14
        assert abs(LaurentPoly.cosh(1, -0.3)(lam) - cmath.cosh(lam - 0.3)) < 1e-14
        assert abs(LaurentPoly.exp(-3, 0.1j)(lam) - cmath.exp(-3 * lam + 0.1j)) < 1e-14


@given(polys, polys, lams)
def test_ring_operations_commute_with_evaluation(a, b, lam):
    scale = 1 + abs(a(lam)) * abs(b(lam)) + abs(a(lam)) + abs(b(lam))
    assert abs((a * b)(lam) - a(lam) * b(lam)) <= 1e-11 * scale * 100
    assert abs((a + b)(lam) - (a(lam) + b(lam))) <= 1e-11 * scale
    assert abs((a - 2.5 * b)(lam) - (a(lam) - 2.5 * b(lam))) <= 1e-11 * scale * 10


@given(polys, lams)
def test_derivative_matches_termwise_formula(p, lam):
    expect = sum(n * c * cmath.exp(n * lam) for n, c in p.coeffs.items())
    assert abs(lp_d_lambda(p)(lam) - expect) <= 1e-12 * (1 + abs(expect))


def test_derivative_matches_finite_difference():
    p = LaurentPoly.sinh(2, 0.3j) * LaurentPoly.cosh(1)
    h = 1e-6
    for lam in (0.0, 0.4, -0.2 + 0.5j):
        fd = (p(lam + h) - p(lam - h)) / (2 * h)
        assert abs(p.d_lambda()(lam) - fd) < 1e-8


def test_leading_and_errors():
    p = LaurentPoly({-2: 1.0, 3: 2j})
    assert lp_leading(p) == (3, 2j)
    assert p.leading("minus_infinity") == (-2, 1.0)
    with pytest.raises(NoAsymptoticTermError):
        lp_leading(LaurentPoly())
    with pytest.raises(ValueError):
        p.leading("sideways")


def test_substitute_shift_and_reflection():
    p = LaurentPoly.sinh(1, 0.2j)
    q = p.substitute(scale=-1, shift=0.5)
    for lam in (0.1, 0.4 - 0.3j):
        assert abs(q(lam) - p(-lam + 0.5)) < 1e-14


def test_pruning_drops_cancelled_terms():
    p = LaurentPoly.sinh(1) + LaurentPoly.sinh(1) * -1
    assert p.is_zero()
    assert lp_eval(p, 0.3) == 0


def _rand_lm(rng, n, lo, k):
    return LaurentMatrix(lo, rng.normal(size=(k, n, n)) + 1j * rng.normal(size=(k, n, n)))


def test_matrix_product_is_pointwise_product(rng):
    a, b = _rand_lm(rng, 3, -2, 4), _rand_lm(rng, 3, 1, 3)
    for lam in (0.2, -0.5 + 0.7j):
        np.testing.assert_allclose((a @ b).eval(lam), a.eval(lam) @ b.eval(lam), rtol=1e-12)
        np.testing.assert_allclose((a + b).eval(lam), a.eval(lam) + b.eval(lam), rtol=1e-12)
        c = np.eye(3) * 2 + 1j
        np.testing.assert_allclose((c @ a).eval(lam), c @ a.eval(lam), rtol=1e-12)
        np.testing.assert_allclose((a @ c).eval(lam), a.eval(lam) @ c, rtol=1e-12)
        p = LaurentPoly.cosh(2, 0.1)
        np.testing.assert_allclose((a * p).eval(lam), a.eval(lam) * p(lam), rtol=1e-12)


def test_matrix_substitute_derivative_blocks(rng):
    a = _rand_lm(rng, 4, -1, 3)
    lam = 0.3 + 0.1j
    np.testing.assert_allclose(a.substitute(shift=0.2j, scale=-1).eval(lam), a.eval(-lam + 0.2j), rtol=1e-12)
    h = 1e-6
    fd = (a.eval(lam + h) - a.eval(lam - h)) / (2 * h)
    np.testing.assert_allclose(a.d_lambda().eval(lam), fd, rtol=1e-6, atol=1e-7)
    np.testing.assert_allclose(a.block(1, 0).eval(lam), a.eval(lam)[2:, :2])
    grid = LaurentMatrix.from_blocks([[a.block(0, 0), a.block(0, 1)], [a.block(1, 0), a.block(1, 1)]])
    assert grid.max_coeff_diff(a) == 0


def test_from_entries_and_entry_roundtrip():
    s = LaurentPoly.sinh(1)
    m = LaurentMatrix.from_entries([[s, 1], [0, s * s]])
    assert m.entry(1, 1) == s * s
    assert m.entry(0, 1) == LaurentPoly.const(1)
    assert m.degree_range() == (-2, 2)


def test_leading_matrix_and_degree_bounds():
    m = LaurentMatrix.from_terms({-1: np.eye(2), 2: np.ones((2, 2))})
    deg, c = m.leading()
    assert deg == 2 and np.allclose(c, 1)
    assert m.leading("minus_infinity")[0] == -1
    check_degree_bounds(m, -1, 2, "m")
    with pytest.raises(ValueError):
        check_degree_bounds(m, 0, 2, "m")
    with pytest.raises(NoAsymptoticTermError):
        LaurentMatrix.zeros(2).leading()
    with pytest.raises(DimensionError):
        m + LaurentMatrix.identity(3)
