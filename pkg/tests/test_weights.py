import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import binom

from specop.weights import (
    BergmanType,
    Custom,
    DirichletBinomial,
    DirichletPower,
    WeightError,
    kernel_diag,
    make_weight,
    parse_space,
    ratio,
    validity_report,
)

alphas_bergman = st.floats(min_value=-5, max_value=0.95, allow_nan=False)


def test_bergman_omega_examples():
    assert make_weight(BergmanType(-1.0)).omega(3) == pytest.approx(0.25, rel=1e-15)
    np.testing.assert_array_equal(make_weight(BergmanType(0.0)).omegas(50), np.ones(50))
    assert ratio(make_weight(BergmanType(0.5)), 0) == 2.0


def test_bergman_omega_matches_binomial_oracle():
    for alpha in (-2.0, -1.0, -0.5, 0.25, 0.75):
        w = make_weight(BergmanType(alpha))
        n = np.arange(60)
        oracle = 1.0 / binom(n - alpha, n)
        np.testing.assert_allclose(w.omegas(60), oracle, rtol=1e-13)


def test_ratio_examples():
    assert ratio(make_weight(BergmanType(-1.0)), 0) == 0.5
    assert all(ratio(make_weight(BergmanType(0.0)), n) == 1.0 for n in range(20))
    assert ratio(make_weight(DirichletPower(1.0)), 0) == 2.0


def test_dirichlet_families():
    np.testing.assert_allclose(make_weight(DirichletPower(1.5)).omegas(8), np.arange(1, 9) ** 1.5, rtol=1e-14)
    n = np.arange(30)
    np.testing.assert_allclose(make_weight(DirichletBinomial(0.7)).omegas(30), binom(n + 0.7, n), rtol=1e-13)
    np.testing.assert_allclose(make_weight(DirichletBinomial(1.0)).omegas(10), n[:10] + 1.0, rtol=1e-15)


def test_rejects_bad_parameters():
    with pytest.raises(WeightError):
        make_weight(BergmanType(1.0))
    with pytest.raises(WeightError):
        make_weight(BergmanType(2.5))
    with pytest.raises(WeightError):
        make_weight(DirichletBinomial(-1.0))
    with pytest.raises(WeightError):
        make_weight(Custom(ratio=3))
    with pytest.raises(ValueError):
        kernel_diag(make_weight(BergmanType(0.0)), 1.0, 10)


def test_bergman_ratio_identity_up_to_a_million():
    for alpha in (-2.0, -1.0, -0.5, 0.25, 0.75):
        w = make_weight(BergmanType(alpha))
        n = np.arange(1_000_001, dtype=float)
        np.testing.assert_array_equal(w.ratios(n.size), (n + 1) / (n + 1 - alpha))
        # scalar path agrees with the vector path
        for k in (0, 17, 999_999):
            assert w.ratio(k) == w.ratios(k + 1)[k]


def test_log_space_omegas_match_direct_product():
    w = make_weight(BergmanType(-1.0))
    big = w.omegas(150_000)
    # w_n = 1/(n+1) exactly for this family
    np.testing.assert_allclose(big[[0, 1, 99_999, 149_999]], 1.0 / np.array([1, 2, 100_000, 150_000]), rtol=1e-12)


def test_validity_examples():
    rep = validity_report(make_weight(BergmanType(-1.0)), 10_000)
    assert rep.is_valid
    assert rep.c0 == 1.0 and rep.c1 == 2.0
    limit = math.pi**2 / 6 - 1
    assert rep.partial_sum <= limit <= rep.partial_sum + rep.tail_bound
    assert abs(rep.partial_sum + rep.tail_bound - limit) < 1e-6
    hardy = validity_report(make_weight(BergmanType(0.0)), 100)
    assert hardy.partial_sum == 0.0 and hardy.is_valid


def test_validity_all_families():
    for kind in (BergmanType(-2.0), BergmanType(0.75), DirichletPower(1.0), DirichletPower(-0.5), DirichletBinomial(1.0)):
        rep = validity_report(make_weight(kind), 2000)
        assert rep.is_valid and not rep.heuristic
        assert min(rep.c0, rep.c1) == 1.0


def test_dirichlet_power_tail_oracle():
    # direct summation of a long stretch of the tail stays below the integral bound
    w = make_weight(DirichletPower(1.0))
    rep = validity_report(w, 500)
    r = w.ratios(2_000_000)[500:]
    assert math.fsum((1 - r) ** 2) <= rep.tail_bound


def test_custom_weight_is_flagged_heuristic():
    w = make_weight(Custom(lambda n: (n + 1.0) / (n + 3.0), name="ratio-(n+1)/(n+3)"))
    rep = validity_report(w, 1000)
    assert rep.heuristic and rep.is_valid and "checked up to" in rep.reason
    assert rep.c1 == pytest.approx(3.0)


def test_non_monotone_custom_weight_is_invalid():
    w = make_weight(Custom(lambda n: 1.1 if n % 2 else 0.9))
    rep = validity_report(w, 50)
    assert not rep.is_valid and rep.monotone == "none" and rep.reason


def test_kernel_diag_examples():
    assert kernel_diag(make_weight(BergmanType(0.0)), 0.5, 200) == pytest.approx(4 / 3, rel=1e-15)
    assert kernel_diag(make_weight(BergmanType(-0.3)), 0.0, 50) == 1.0
    assert kernel_diag(make_weight(BergmanType(-1.0)), 0.5, 200) == pytest.approx(16 / 9, rel=1e-15)


def test_parse_space():
    assert parse_space("bergman:-1").kind == BergmanType(-1.0)
    assert parse_space("dirichlet-pow:2").kind == DirichletPower(2.0)
    assert parse_space("dirichlet-binom:1").kind == DirichletBinomial(1.0)
    for bad in ("bergman", "hardy:0", "bergman:x", "bergman:1"):
        with pytest.raises(WeightError):
            parse_space(bad)


@settings(max_examples=60, deadline=None)
@given(alphas_bergman, st.integers(min_value=2, max_value=400))
def test_monotone_sign_and_constants(alpha, n_terms):
    w = make_weight(BergmanType(alpha))
    gaps = 1 - w.ratios(n_terms)
    assert np.all(gaps >= 0) or np.all(gaps <= 0)
    rep = validity_report(w, n_terms)
    assert rep.c0 * rep.c1 >= 1 and min(rep.c0, rep.c1) == 1.0


@settings(max_examples=40, deadline=None)
@given(st.one_of(alphas_bergman.map(BergmanType), st.floats(-3, 3).map(DirichletPower)), st.integers(1, 300), st.integers(1, 300))
def test_partial_sums_nondecreasing(kind, n1, n2):
    w = make_weight(kind)
    lo, hi = sorted((n1, n2))
    assert validity_report(w, lo).partial_sum <= validity_report(w, hi).partial_sum


@settings(max_examples=60, deadline=None)
@given(alphas_bergman, st.floats(0, 0.99), st.floats(0, 0.99), st.integers(1, 200), st.integers(1, 200))
def test_kernel_diag_monotone(alpha, r1, r2, n1, n2):
    w = make_weight(BergmanType(alpha))
    (ra, rb), (na, nb) = sorted((r1, r2)), sorted((n1, n2))
    assert kernel_diag(w, ra, na) <= kernel_diag(w, rb, na) * (1 + 1e-15)
    assert kernel_diag(w, ra, na) <= kernel_diag(w, ra, nb) * (1 + 1e-15)
