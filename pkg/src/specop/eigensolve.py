"""Eigenvalues of real symmetric tridiagonal matrices.

All eigenvalues come from implicit-shift QL; eigenvalue counting and
selective refinement use Sturm sequences (signs of the pivots of the
shifted LDL^T factorization). The inner loops live in a compiled module
when it is importable and fall back to an identical pure-Python version
otherwise; ``BACKEND`` names the one in use and ``SPECOP_PURE_PYTHON=1``
forces the fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _tridiag_py
from .operator import SymTridiag

__all__ = [
    "BACKEND",
    "ConvergenceError",
    "EigenResult",
    "eigenvalues",
    "sturm_count",
    "kth_eigenvalues",
    "outliers",
    "charpoly_eigs_bruteforce",
    "gershgorin_bounds",
]

if os.environ.get("SPECOP_PURE_PYTHON", "").strip() not in ("", "0"):
    _kernels = _tridiag_py
    BACKEND = "python"
else:
    try:
        from . import _tridiag as _kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _kernels = _tridiag_py
        BACKEND = "python"

MAX_SWEEPS = 50
# requested tolerances below this are clamped; deflation is eps-limited anyway
TOL_FLOOR = 4 * np.finfo(float).eps
STURM_PIVOT = 1e-14
REFINE_WIDTH = 1e-12


class ConvergenceError(RuntimeError):
    """QL iteration hit the sweep cap; ``partial`` holds the current diagonal."""

    def __init__(self, msg: str, partial: "EigenResult"):
        super().__init__(msg)
        self.partial = partial


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    achieved_tol: float
    iterations: int


def eigenvalues(t: SymTridiag, tol: float = 1e-13) -> EigenResult:
    """All eigenvalues of ``t`` in ascending order.

    Each eigenvalue is accurate to ``tol * ||t||_inf`` in absolute terms
    (Weyl's bound on the neglected off-diagonals) on top of the O(eps)
    backward error of the orthogonal sweeps.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    tol = max(tol, TOL_FLOOR)
    values, achieved, sweeps, ok = _kernels.tql_eigenvalues(t.diag, t.offdiag, tol, MAX_SWEEPS)
    result = EigenResult(np.asarray(values, dtype=float), float(achieved), int(sweeps))
    if not ok:
        raise ConvergenceError(
            f"QL did not converge within {MAX_SWEEPS} sweeps for one eigenvalue", result
        )
    return result


def _pivmin(t: SymTridiag) -> float:
    return STURM_PIVOT * max(t.norm_inf(), np.finfo(float).tiny)


def sturm_count(t: SymTridiag, x: float) -> int:
    """Number of eigenvalues of ``t`` strictly below ``x``."""
    return int(_kernels.sturm_count(t.diag, t.offdiag, float(x), _pivmin(t)))


def gershgorin_bounds(t: SymTridiag) -> tuple[float, float]:
    d = t.diag
    radius = np.zeros_like(d)
    radius[:-1] += np.abs(t.offdiag)
    radius[1:] += np.abs(t.offdiag)
    lo = float(np.min(d - radius))
    hi = float(np.max(d + radius))
    pad = 2 * STURM_PIVOT * max(t.norm_inf(), 1.0)
    return lo - pad, hi + pad


def kth_eigenvalues(t: SymTridiag, indices, width: float | None = None) -> np.ndarray:
    """Eigenvalues with the given 0-based ascending indices, by Sturm bisection."""
    idx = np.asarray(indices, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= t.n):
        raise IndexError("eigenvalue index out of range")
    if width is None:
        width = REFINE_WIDTH * max(t.norm_inf(), np.finfo(float).tiny)
    lo, hi = gershgorin_bounds(t)
    return np.asarray(
        _kernels.bisect_eigenvalues(t.diag, t.offdiag, idx, lo, hi, width, _pivmin(t)),
        dtype=float,
    )


def outliers(t: SymTridiag, interval: tuple[float, float], margin: float):
    """Eigenvalues below ``interval[0] - margin`` and above ``interval[1] + margin``.

    Both lists are ascending. Counts come from Sturm sequences; each value is
    refined by bisection to width ``1e-12 * ||t||_inf``.
    """
    if not margin > 0:
        raise ValueError("margin must be positive")
    lo, hi = interval
    n_below = sturm_count(t, lo - margin)
    n_not_above = sturm_count(t, hi + margin)
    below = kth_eigenvalues(t, np.arange(n_below))
    above = kth_eigenvalues(t, np.arange(n_not_above, t.n))
    # bisection midpoints can land a hair on the wrong side of the threshold
    below = below[below < lo - margin] if below.size else below
    above = above[above > hi + margin] if above.size else above
    return below, above


# -- brute-force oracle ---------------------------------------------------


_EPS = float(np.finfo(float).eps)


def _charpoly(d, e) -> list[Fraction]:
    """Exact coefficients (highest degree first) of det(T - x I) from the minor recurrence."""
    p_prev = [Fraction(1)]
    p = [Fraction(-1), Fraction(d[0])]
    for k in range(1, len(d)):
        lin = [Fraction(-1), Fraction(d[k])]
        e2 = Fraction(e[k - 1]) ** 2
        prod = _polymul(lin, p)
        tail = [e2 * c for c in p_prev]
        nxt = prod[: len(prod) - len(tail)] + [x - y for x, y in zip(prod[-len(tail) :], tail)]
        p_prev, p = p, nxt
    return p


def _polymul(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _polyrem(f: list[Fraction], g: list[Fraction]) -> list[Fraction]:
    f = list(f)
    while len(f) >= len(g):
        q = f[0] / g[0]
        for i in range(len(g)):
            f[i] -= q * g[i]
        f.pop(0)
    while f and f[0] == 0:
        f.pop(0)
    return f


def _sturm_chain(f: list[Fraction]) -> list[list[Fraction]]:
    deg = len(f) - 1
    chain = [f, [c * (deg - i) for i, c in enumerate(f[:-1])]]
    while len(chain[-1]) > 1:
        r = _polyrem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_at(poly: list[Fraction], approx: np.ndarray, x: float) -> int:
    """Sign of ``poly(x)``, from floats when the Horner error bound allows it."""
    v = 0.0
    mag = 0.0
    ax = abs(x)
    for c in approx:
        v = v * x + c
        mag = mag * ax + abs(c)
    if np.isfinite(v) and abs(v) > 4.0 * len(approx) * _EPS * mag:
        return 1 if v > 0 else -1
    xf = Fraction(x)
    w = Fraction(0)
    for c in poly:
        w = w * xf + c
    return (w > 0) - (w < 0)


class _SturmCounter:
    def __init__(self, coeffs: list[Fraction]):
        self.chain = _sturm_chain(coeffs)
        self.approx = [np.array([float(c) for c in p]) for p in self.chain]
        lead = [(p[0] > 0) == ((len(p) - 1) % 2 == 0) for p in self.chain]
        self.at_minus_inf = sum(a != b for a, b in zip(lead[:-1], lead[1:]))

    def below(self, x: float) -> int:
        """Number of distinct real roots below ``x``, counted exactly."""
        signs = [s for p, q in zip(self.chain, self.approx) if (s := _sign_at(p, q, x))]
        return self.at_minus_inf - sum(a != b for a, b in zip(signs[:-1], signs[1:]))


def _real_roots(coeffs: list[Fraction], bound: float) -> list[float]:
    """Roots of a polynomial with simple real roots, all inside ``[-bound, bound]``.

    An exact Sturm chain isolates each root and bisection narrows it to a
    bracket of relative width about machine epsilon. Floating-point roots
    only seed the brackets; every bracket is certified by exact counts.
    """
    deg = len(coeffs) - 1
    if deg == 1:
        return [float(-coeffs[1] / coeffs[0])]
    count = _SturmCounter(coeffs)
    with np.errstate(all="ignore"):
        guesses = np.sort(np.roots([float(c) for c in coeffs]).real)
    width = 4.0 * _EPS * bound
    roots = []
    for k in range(deg):
        g = guesses[k] if np.isfinite(guesses[k]) else 0.0
        lo, hi = -bound, bound
        delta = 1e-9 * bound
        while delta < bound:
            if count.below(g - delta) <= k < count.below(g + delta):
                lo, hi = max(lo, g - delta), min(hi, g + delta)
                break
            delta *= 1e3
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if count.below(mid) > k:
                hi = mid
            else:
                lo = mid
        roots.append(0.5 * (lo + hi))
    return roots


def charpoly_eigs_bruteforce(t: SymTridiag) -> np.ndarray:
    """Eigenvalues of a matrix of dimension <= 5 from its characteristic polynomial.

    The matrix is first split at exactly-zero off-diagonals so every block
    is irreducible and therefore has simple eigenvalues. The polynomial is
    expanded in exact rational arithmetic, so nearly coincident roots stay
    separated.
    """
    if t.n > 5:
        raise ValueError("brute-force oracle is limited to dimension <= 5")
    d = np.asarray(t.diag, dtype=float)
    e = np.asarray(t.offdiag, dtype=float)
    bound = 1.0 + float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e), initial=0.0))
    values: list[float] = []
    start = 0
    for stop in [*(k + 1 for k in range(t.n - 1) if e[k] == 0.0), t.n]:
        values.extend(_real_roots(_charpoly(d[start:stop], e[start : stop - 1]), bound))
        start = stop
    return np.sort(np.array(values))
