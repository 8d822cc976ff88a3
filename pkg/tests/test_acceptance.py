"""Acceptance suite: one recorded verdict per criterion, printed at the end of the run."""

import cmath
import math
import time

import mpmath
import numpy as np
import pytest

from specop import BergmanType, DirichletBinomial, make_weight
from specop.dirichlet import dirichlet_candidate, dirichlet_norm_diagnostic, dirichlet_params, ode_residual
from specop.eigensolve import charpoly_eigs_bruteforce, eigenvalues, outliers, sturm_count
from specop.operator import SymTridiag, essential_interval, inner_check, jacobi_truncation, section
from specop.pointspec import (
    eigenfunction_closed,
    eigenfunction_recurrence,
    eigenvalue_mp,
    max_relative_deviation,
    point_spectrum,
    recurrence_precision,
    section_residual,
)
from specop.weights import validity_report

ALPHAS = [-2.0, -1.0, -0.5, 0.25, 0.5, 0.75]
A_VALUES = [0.3, 0.9, 1.1, 2.0]


def lam0_reference():
    # alpha = -1, a = 0.5, j = 0, evaluated independently of the package
    return 1.25 + (1 - 3 * math.sqrt(3)) / 4


def test_criterion_1_smallest_eigenvalue(record):
    w = make_weight(BergmanType(-1.0))
    start = time.perf_counter()
    t = jacobi_truncation(w, 0.5, 500)
    smallest = eigenvalues(t).values[0]
    elapsed = time.perf_counter() - start
    err = abs(smallest - lam0_reference())
    ok = err < 1e-8 and elapsed < 1.0
    record(1, ok, f"|lam_min - lam_0| = {err:.2e} (< 1e-8), runtime {elapsed:.3f} s (< 1 s)")
    assert ok


def test_criterion_2_four_smallest(record):
    w = make_weight(BergmanType(-1.0))
    v = eigenvalues(jacobi_truncation(w, 0.5, 2000)).values[:4]
    # the four smallest, from the formula evaluated in extended precision
    pred = np.array([float(eigenvalue_mp(-1, 0.5, j, "minus")) for j in range(4)])
    err = np.max(np.abs(v - pred))
    ok = err < 1e-6 and np.all(v < 0.25)
    record(2, ok, f"max |delta| = {err:.2e} (< 1e-6), max value {v.max():.7f} (< 0.25)")
    assert ok


def test_criterion_3_no_outliers_at_and_beyond_circle(record):
    w = make_weight(BergmanType(-1.0))
    details, ok = [], True
    for a in (1.0, 1.5):
        t = jacobi_truncation(w, a, 800)
        below, above = outliers(t, essential_interval(a), 1e-6)
        v = eigenvalues(t).values
        inside = v[0] >= -1e-10 and v[-1] <= (1 + a) ** 2 + 1e-10
        ok &= below.size == 0 and above.size == 0 and inside
        details.append(f"a={a}: {below.size + above.size} outliers, range [{v[0]:.2e}, {v[-1]:.6f}]")
    record(3, ok, "; ".join(details))
    assert ok


def test_criterion_4_both_branches(record):
    w = make_weight(BergmanType(0.5))
    top = eigenvalues(jacobi_truncation(w, 1.0, 1000)).values[-1]
    err1 = abs(top - 4.5)
    t = jacobi_truncation(w, 2.0, 1000)
    below, above = outliers(t, essential_interval(2.0), 1e-6)
    sp = {e.branch: e.lam for e in point_spectrum(0.5, 2.0, 0)}
    err_hi = abs(above[-1] - sp["plus"]) if above.size else math.inf
    err_lo = abs(below[0] - sp["minus"]) if below.size else math.inf
    ref_ok = abs(sp["plus"] - 9.5584220) < 5e-8 and abs(sp["minus"] - 0.9415780) < 5e-8
    ok = err1 < 1e-6 and err_hi < 1e-6 and err_lo < 1e-6 and ref_ok and above[-1] > 9 and below[0] < 1
    record(
        4, ok,
        f"a=1 top |delta| = {err1:.2e}; a=2 above {above[-1]:.7f} (|delta| {err_hi:.2e}), "
        f"below {below[0]:.7f} (|delta| {err_lo:.2e})",
    )
    assert ok


def test_criterion_5_hardy_regression(record):
    w = make_weight(BergmanType(0.0))
    n = 800
    k = np.arange(1, n + 1)
    details, ok = [], True
    for a in (0.5, 1.0, 2.0):
        t = jacobi_truncation(w, a, n)
        below, above = outliers(t, essential_interval(a), 1e-8)
        v = eigenvalues(t).values
        toeplitz = np.sort(a * a + 1 - 2 * a * np.cos(k * np.pi / (n + 1)))
        err = np.max(np.abs(v - toeplitz))
        ok &= below.size == 0 and above.size == 0 and err < 1e-10
        details.append(f"a={a}: {below.size + above.size} outliers, toeplitz err {err:.1e}")
    record(5, ok, "; ".join(details))
    assert ok


def test_criterion_6_closed_form_vs_recurrence(record):
    worst_dev, worst_res, count = 0.0, 0.0, 0
    for alpha in ALPHAS:
        w = make_weight(BergmanType(alpha))
        for a in A_VALUES:
            for e in point_spectrum(alpha, a, 3):
                if not e.valid:
                    continue
                dps = recurrence_precision(e.pole, 50)
                with mpmath.workdps(dps):
                    lam = eigenvalue_mp(alpha, a, e.j, e.branch, dps)
                    rec = eigenfunction_recurrence(w, a, lam, 50, dps=dps)
                worst_dev = max(worst_dev, max_relative_deviation(eigenfunction_closed(alpha, a, e, 50), rec))
                worst_res = max(worst_res, section_residual(w, a, alpha, e, 500))
                count += 1
    ok = count > 0 and worst_dev < 1e-10 and worst_res < 1e-8
    record(6, ok, f"{count} eigenpairs: max rel dev {worst_dev:.1e} (< 1e-10), max residual {worst_res:.1e} (< 1e-8)")
    assert ok


def test_criterion_7_gauge(record):
    w = make_weight(BergmanType(-1.0))
    theta = math.pi / 3
    a = 0.7 * cmath.exp(1j * theta)
    t_rot, g = section(w, a, 500)
    t_ref, _ = section(w, 0.7, 500)
    same = np.array_equal(eigenvalues(t_rot).values, eigenvalues(t_ref).values)
    worst = 0.0
    for e in point_spectrum(-1, 0.7, 3):
        h_rot = eigenfunction_closed(-1, a, e, 60)
        h_ref = eigenfunction_closed(-1, 0.7, e, 60)
        phases = np.exp(-1j * theta * np.arange(60))
        worst = max(worst, float(np.max(np.abs(h_rot - h_ref * phases) / np.abs(h_ref))))
    ok = same and worst < 1e-12 and abs(g.phase - theta) < 1e-12
    record(7, ok, f"eigenvalues bit-identical: {same}; phase-factor error {worst:.1e} (< 1e-12)")
    assert ok


def test_criterion_8_inner(record):
    verdicts = []
    for alpha in (-1.0, 0.0, 0.5):
        w = make_weight(BergmanType(alpha))
        e1 = np.array([0.0, 1.0 / math.sqrt(w.omega(1))])
        verdicts.append(inner_check(w, e1) and inner_check(w, [1.0]))
        for a in (0.5, 2.0, 0.3 - 0.4j):
            verdicts.append(not inner_check(w, [a, -1.0]))
    ok = all(verdicts)
    record(8, ok, f"{sum(verdicts)}/{len(verdicts)} verdicts as expected for alpha in (-1, 0, 0.5)")
    assert ok


def test_criterion_9_oracle_equivalence(record):
    rng = np.random.default_rng(20261016)
    worst, sturm_bad = 0.0, 0
    for _ in range(10_000):
        n = int(rng.integers(1, 6))
        t = SymTridiag(rng.normal(size=n), rng.normal(size=n - 1))
        v = eigenvalues(t).values
        worst = max(worst, float(np.max(np.abs(v - charpoly_eigs_bruteforce(t)))))
        x = rng.normal() * 2
        if np.min(np.abs(v - x)) > 1e-9 and sturm_count(t, x) != int(np.sum(v < x)):
            sturm_bad += 1
        for k in range(n):
            # just below and just above each eigenvalue
            if sturm_count(t, v[k] - 1e-8) > k or sturm_count(t, v[k] + 1e-8) < k + 1:
                sturm_bad += 1
    ok = worst < 1e-10 and sturm_bad == 0
    record(9, ok, f"10^4 matrices: max |delta| {worst:.1e} (< 1e-10), Sturm mismatches {sturm_bad}")
    assert ok


def test_criterion_10_dirichlet(record):
    rng = np.random.default_rng(61)
    w = make_weight(DirichletBinomial(1.0))
    worst_dev, worst_res, worst_rel, done = 0.0, 0.0, 0.0, 0
    while done < 20:
        a = rng.uniform(0.2, 3.0)
        if rng.random() < 0.5:
            lam = rng.uniform(0, (1 - a) ** 2)
        else:
            lam = rng.uniform((1 + a) ** 2, (1 + a) ** 2 + 1)
        p = dirichlet_params(1.0, a, lam)
        h = dirichlet_candidate(1.0, a, lam, 30, as_mp=True)
        rec = eigenfunction_recurrence(w, a, lam, 30, dps=300)
        worst_dev = max(worst_dev, max_relative_deviation(np.array([complex(x) for x in h]), rec))
        worst_res = max(worst_res, ode_residual(p, h))
        worst_rel = max(worst_rel, abs(p.mu + p.nu - 1))
        done += 1
    diag = dirichlet_norm_diagnostic(1.0, 0.5, 0.1, 2000)
    ok = worst_dev < 1e-8 and worst_res < 1e-10 and worst_rel < 1e-12
    record(
        10, ok,
        f"20 pairs: dev {worst_dev:.1e} (< 1e-8), residual {worst_res:.1e} (< 1e-10), "
        f"|mu+nu-1| {worst_rel:.1e}; diagnostic slope {diag.slope:.3g} (not judged)",
    )
    assert ok


def test_criterion_11_validity(record):
    reports = {alpha: validity_report(make_weight(BergmanType(alpha)), 10_000) for alpha in (-2, -1, -0.5, 0.25, 0.75)}
    all_valid = all(r.is_valid for r in reports.values())
    r = reports[-1]
    err = abs(r.partial_sum + r.tail_bound - (math.pi**2 / 6 - 1))
    ok = all_valid and err < 1e-6
    record(11, ok, f"all valid: {all_valid}; alpha=-1 sum error {err:.1e} (< 1e-6)")
    assert ok
