import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from specop import BergmanType, make_weight
from specop.series import (
    as_series,
    binomial_series,
    evaluate,
    exponential,
    product,
    weighted_partial_norms,
)

small = st.floats(min_value=-2, max_value=2, allow_nan=False)
cplx = st.builds(complex, small, small)
series = st.lists(cplx, min_size=1, max_size=12).map(lambda xs: np.array(xs, dtype=complex))


def test_binomial_examples():
    np.testing.assert_array_equal(binomial_series(1, 2, 3), [1, -2, 1])
    s = 0.7320508
    oracle = [binom(n + 2, 2) * s**n for n in range(3)]
    np.testing.assert_allclose(binomial_series(s, -3, 3), oracle, rtol=1e-15)
    np.testing.assert_allclose(binomial_series(s, -3, 3), [1, 2.1961524, 3.2153903], rtol=1e-7)
    np.testing.assert_allclose(binomial_series(0.5, -1.5, 2), [1, 0.75])


def test_binomial_general_exponent_oracle():
    s, e = 0.3 - 0.2j, -2.7
    n = np.arange(25)
    oracle = binom(e, n) * (-s) ** n
    np.testing.assert_allclose(binomial_series(s, e, 25), oracle, rtol=1e-13)


def test_product_examples():
    np.testing.assert_array_equal(product([1, 1], [1, 1], 3), [1, 2, 1])
    v = np.array([3, -1, 2j, 5])
    np.testing.assert_array_equal(product([1, 0, 0], v, 3), v[:3])
    np.testing.assert_array_equal(product([1, -1], np.ones(8), 8), [1, 0, 0, 0, 0, 0, 0, 0])
    # zero padding past the natural length
    np.testing.assert_array_equal(product([1], [2], 3), [2, 0, 0])


def test_exponential_examples():
    np.testing.assert_allclose(exponential([0, 1], 3), [1, 1, 0.5])
    np.testing.assert_array_equal(exponential(np.zeros(5), 5), [1, 0, 0, 0, 0])
    np.testing.assert_allclose(exponential([0, -1], 3), [1, -1, 0.5])
    with pytest.raises(ValueError):
        exponential([0.1, 1], 4)


def test_exponential_matches_taylor_oracle():
    # exp(z/(1-z)) has coefficients sum_k binom(n-1, k-1)/k!
    u = np.concatenate(([0.0], np.ones(20)))
    e = exponential(u, 20)
    oracle = [1.0] + [sum(binom(n - 1, k - 1) / mpmath.factorial(k) for k in range(1, n + 1)) for n in range(1, 20)]
    np.testing.assert_allclose(e, np.array(oracle, dtype=float), rtol=1e-13)


def test_evaluate_examples():
    assert evaluate(np.array([1, 2, 3]), 0) == 1
    np.testing.assert_allclose(evaluate(np.ones(60), 0.5), 2.0, rtol=1e-15)
    assert evaluate(np.array([1, -2, 1]), 1) == 0


def test_weighted_partial_norm_examples():
    w = make_weight(BergmanType(-1.0))
    np.testing.assert_array_equal(weighted_partial_norms([1], w), [1])
    np.testing.assert_allclose(weighted_partial_norms([1, 1], w), [1, 1.5])
    np.testing.assert_allclose(weighted_partial_norms([0, 1], make_weight(BergmanType(0.5))), [0, 2])


def test_mp_series_keep_precision():
    with mpmath.workdps(40):
        u = binomial_series(mpmath.mpf(1) / 3, -2, 5)
        assert u.dtype == object
        assert abs(u[1] - mpmath.mpf(2) / 3) < mpmath.mpf(10) ** -38
        p = product(u, as_series([1, 0.5]), 5)
        assert p.dtype == object


@settings(max_examples=80, deadline=None)
@given(series, series, series, st.integers(1, 15))
def test_product_commutative_associative(u, v, w, n):
    np.testing.assert_allclose(product(u, v, n), product(v, u, n), atol=1e-12)
    np.testing.assert_allclose(product(product(u, v, n), w, n), product(u, product(v, w, n), n), atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(cplx, st.integers(0, 6), st.integers(1, 12))
def test_integer_exponent_is_repeated_product(s, e, n):
    expected = np.zeros(n, dtype=complex)
    expected[0] = 1
    for _ in range(e):
        expected = product(expected, [1, -s], n)
    np.testing.assert_allclose(binomial_series(s, e, n), expected, atol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(cplx, min_size=1, max_size=10))
def test_exponential_inverse(coeffs):
    u = np.concatenate(([0], coeffs)).astype(complex)
    norm = np.sum(np.abs(u))
    if norm > 1:
        u = u / norm
    e = product(exponential(u, 50), exponential(-u, 50), 50)
    expected = np.zeros(50)
    expected[0] = 1
    np.testing.assert_allclose(e, expected, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(series, st.floats(-3, 0.9))
def test_partial_norms_nondecreasing(u, alpha):
    s = weighted_partial_norms(u, make_weight(BergmanType(alpha)))
    assert np.all(np.diff(s) >= 0)
