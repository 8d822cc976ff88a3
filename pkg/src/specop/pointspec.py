"""Closed-form point spectra and eigenfunctions of V_a on Bergman-type spaces.

For ``w_n = binom(n - alpha, n)^{-1}`` with ``alpha < 1`` the eigenvalue
candidates are indexed by ``j >= 0`` and a branch sign. With
``rho_j = sqrt(alpha^2 + 4|a|^2 (j+1)(j+1-alpha))``::

    lam_j^{+-} = |a|^2 + 1 + (alpha^2 +- (2j + 2 - alpha) rho_j) / (2 (j+1)(j+1-alpha))

The minus branch has eigenfunction ``(z - s)^j / (1 - s z)^{j+2-alpha}`` with
``s = (rho_j + alpha) / (2|a|(j+1))`` and the plus branch
``(z + t)^j / (1 + t z)^{j+2-alpha}`` with ``t = (rho_j - alpha) / (2|a|(j+1))``.
A branch is an eigenvalue exactly when its pole lies in ``(0, 1)``:
``alpha < 0`` keeps the minus branch for ``|a| < 1``; ``alpha in (0, 1)``
keeps the plus branch always and the minus branch for ``|a| > 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import mpmath
import numpy as np

from .operator import gauge_reduce, jacobi_truncation, to_normalized
from .series import CoeffSeq, binomial_series, exponential, product, to_complex
from .weights import WeightSequence, validity_report

__all__ = [
    "PointEigen",
    "BoundsResult",
    "DegenerateParameterError",
    "rho",
    "point_spectrum",
    "eigenvalue_mp",
    "eigenfunction_closed",
    "eigenfunction_recurrence",
    "recurrence_precision",
    "eigenvalue_bounds",
    "case3_candidate",
    "associate",
    "max_relative_deviation",
    "section_residual",
]

Branch = Literal["plus", "minus"]

# |b -+ 2| below this marks the double root c = +-1
CASE3_TOL = 1e-12


class DegenerateParameterError(ValueError):
    """Parameters sit on the double-root case ``c = +-1`` of ``z^2 - b z + 1``."""


@dataclass(frozen=True)
class PointEigen:
    """One eigenvalue candidate.

    ``pole`` is the positive parameter (``s`` or ``t``) of the eigenfunction;
    the root of ``z^2 - b z + 1`` inside the closed disc is ``+pole`` on the
    minus branch and ``-pole`` on the plus branch. ``degenerate`` flags the
    double root (``|pole| = 1``), which never yields an eigenvalue.
    """

    j: int
    branch: Branch
    lam: float
    rho: float
    pole: float
    valid: bool
    degenerate: bool = False

    @property
    def b(self) -> float:
        """Middle coefficient of ``z^2 - b z + 1``; equals ``c + 1/c``."""
        inner_root = self.pole if self.branch == "minus" else -self.pole
        return inner_root + 1.0 / inner_root


@dataclass(frozen=True)
class BoundsResult:
    lo: float
    hi: float
    case_tag: Literal["non_decreasing", "non_increasing"]
    hi_open: bool = False

    def contains(self, lam: float) -> bool:
        if lam < self.lo:
            return False
        return lam < self.hi if self.hi_open else lam <= self.hi


def _check_alpha(alpha: float) -> None:
    if not alpha < 1:
        raise ValueError(f"closed forms need alpha < 1, got {alpha}")


def rho(alpha: float, a_mod: float, j: int) -> float:
    """``sqrt(alpha^2 + 4 a^2 (j+1)(j+1-alpha))``."""
    _check_alpha(alpha)
    return math.sqrt(alpha * alpha + 4.0 * a_mod * a_mod * (j + 1) * (j + 1 - alpha))


def _lam(alpha, a_mod, j, sign, r):
    # works for floats and mpf alike
    return a_mod * a_mod + 1 + (alpha * alpha + sign * (2 * j + 2 - alpha) * r) / (
        2 * (j + 1) * (j + 1 - alpha)
    )


def _entry(alpha: float, a_mod: float, j: int, branch: Branch) -> PointEigen:
    r = rho(alpha, a_mod, j)
    sign = 1 if branch == "plus" else -1
    lam = _lam(alpha, a_mod, j, sign, r)
    pole = (r - sign * alpha) / (2.0 * a_mod * (j + 1))
    b = (a_mod * a_mod + 1.0 - lam) / a_mod
    degenerate = abs(b - 2.0) < CASE3_TOL or abs(b + 2.0) < CASE3_TOL
    if branch == "minus":
        exists = a_mod < 1.0 if alpha < 0 else a_mod > 1.0
    else:
        exists = True
    return PointEigen(j, branch, lam, r, pole, exists and not degenerate, degenerate)


def point_spectrum(alpha: float, a, jmax: int) -> list[PointEigen]:
    """Eigenvalue candidates for ``j = 0..jmax``, sorted by ``j``, minus before plus.

    ``alpha < 0`` lists only the minus branch, ``alpha in (0, 1)`` both. The
    constant weight ``alpha = 0`` has no point spectrum and returns ``[]``.
    """
    _check_alpha(alpha)
    a_mod = gauge_reduce(a).modulus
    if a_mod == 0:
        raise ValueError("a = 0 is excluded: V_0 is diagonal")
    if jmax < 0:
        raise ValueError("jmax must be nonnegative")
    if alpha == 0:
        return []
    branches: tuple[Branch, ...] = ("minus",) if alpha < 0 else ("minus", "plus")
    return [_entry(alpha, a_mod, j, br) for j in range(jmax + 1) for br in branches]


def eigenvalue_mp(alpha, a_mod, j: int, branch: Branch, dps: int = 50):
    """The eigenvalue candidate as an ``mpf`` at ``dps`` digits."""
    _check_alpha(float(alpha))
    with mpmath.workdps(dps):
        al = mpmath.mpf(alpha)
        am = mpmath.mpf(a_mod)
        r = mpmath.sqrt(al * al + 4 * am * am * (j + 1) * (j + 1 - al))
        out = _lam(al, am, j, 1 if branch == "plus" else -1, r)
    return out


def _closed_factors(alpha, pole, j, branch, n_terms):
    # normalized so the constant term is 1:
    # minus: (1 - z/s)^j (1 - s z)^{-(j+2-alpha)}; plus: (1 + z/t)^j (1 + t z)^{-(j+2-alpha)}
    sgn = 1 if branch == "minus" else -1
    num = binomial_series(sgn / pole, j, min(j + 1, n_terms))
    den = binomial_series(sgn * pole, -(j + 2 - alpha), n_terms)
    return product(num, den, n_terms)


def eigenfunction_closed(
    alpha: float, a, entry: PointEigen, n_terms: int, dps: int | None = None
) -> CoeffSeq:
    """Maclaurin coefficients of the eigenfunction for ``entry`` with ``h_0 = 1``.

    For complex ``a = |a| e^{i theta}`` coefficient ``n`` carries the factor
    ``e^{-i n theta}``.

    Notes
    -----
    Expanding the normalized numerator ``(1 -+ z/pole)^j`` produces terms of
    size ``pole^{-j}`` that cancel against the denominator series, so the
    product is formed in mpmath with enough guard digits (``dps``, chosen
    from the pole when omitted) and rounded at the end. The numerator has
    only ``j + 1`` terms, so this costs ``O(j n_terms)`` operations.
    """
    if not entry.valid:
        raise ValueError(f"entry j={entry.j} ({entry.branch}) is not an eigenvalue")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    g = gauge_reduce(a)
    if dps is None:
        dps = 25 + int(math.ceil(2 * entry.j * math.log10(max(1.0 / entry.pole, 1.0))))
    with mpmath.workdps(dps):
        al = mpmath.mpf(alpha)
        am = mpmath.mpf(g.modulus)
        j = entry.j
        r = mpmath.sqrt(al * al + 4 * am * am * (j + 1) * (j + 1 - al))
        sign = 1 if entry.branch == "plus" else -1
        pole = (r - sign * al) / (2 * am * (j + 1))
        h = to_complex(_closed_factors(al, pole, j, entry.branch, n_terms))
    if g.phase:
        h = h * np.exp(-1j * g.phase * np.arange(n_terms))
    return h


def recurrence_precision(pole: float, n_terms: int) -> int:
    """Working digits for the forward recurrence to keep ~15 correct digits.

    The eigenfunction is the recessive solution; the dominant one grows
    faster by ``pole^{-2}`` per step.
    """
    pole = min(max(abs(pole), 1e-300), 1.0)
    return int(25 + 2 * n_terms * math.log10(1.0 / pole))


def eigenfunction_recurrence(
    w: WeightSequence, a_mod: float, lam, n_terms: int, dps: int | None = None
) -> CoeffSeq:
    """The formal solution of ``V_a h = lam h`` with ``h_0 = 1`` (real ``a > 0``).

    ``h_{n+1} = ((a^2 + r_n - lam) h_n - a h_{n-1}) / (a r_n)``. Nothing is
    claimed about membership in the space. In double precision the recursion
    amplifies rounding along the dominant solution; pass ``dps`` (and an
    ``mpf`` eigenvalue) to run it in mpmath.
    """
    if not a_mod > 0:
        raise ValueError("a_mod must be positive; for a = 0 the relation is not a recurrence")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    if dps is None:
        a = float(a_mod)
        lam = float(lam)
        r = w.ratios(n_terms)
        h = np.zeros(n_terms, dtype=complex)
        h[0] = 1.0
        prev, cur = 0.0, 1.0
        for n in range(n_terms - 1):
            nxt = ((a * a + r[n] - lam) * cur - a * prev) / (a * r[n])
            h[n + 1] = nxt
            prev, cur = cur, nxt
        return h
    with mpmath.workdps(dps):
        a = mpmath.mpf(a_mod)
        lam = mpmath.mpf(lam)
        out = [mpmath.mpf(1)]
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        for n in range(n_terms - 1):
            rn = w.ratio_mp(n)
            nxt = ((a * a + rn - lam) * cur - a * prev) / (a * rn)
            out.append(nxt)
            prev, cur = cur, nxt
        return np.array([complex(x) for x in out], dtype=complex)


def eigenvalue_bounds(w: WeightSequence, a_mod: float, n_check: int = 10_000) -> BoundsResult:
    """Interval containing every eigenvalue of ``V_a`` for a monotone weight.

    Non-decreasing weights give ``[(a-1)^2 - C0 a, (a+1)^2 + (C0-1) a]``;
    non-increasing ones give ``[(a-1)^2 - (C1-1), (a-1)^2)``. A constant
    weight is treated as non-increasing, giving an empty interval.
    """
    if not a_mod > 0:
        raise ValueError("a_mod must be positive")
    rep = validity_report(w, n_check)
    if not rep.monotone:
        raise ValueError(f"weight is not monotone on the checked range: {rep.reason}")
    if rep.c0 > 1.0:
        return BoundsResult(
            (a_mod - 1) ** 2 - rep.c0 * a_mod,
            (a_mod + 1) ** 2 + (rep.c0 - 1) * a_mod,
            "non_decreasing",
        )
    return BoundsResult((a_mod - 1) ** 2 - (rep.c1 - 1), (a_mod - 1) ** 2, "non_increasing", True)


def case3_candidate(
    alpha: float, a_mod: float, sign: int, n_terms: int, normalize: bool = True
) -> CoeffSeq:
    """Coefficients of ``(1 - sz)^{alpha-2} exp(-alpha (1/a - s) / (z - s))``, ``s = sign``.

    This is the general solution of the eigenvalue equation at the double
    root ``lam = (a - s)^2``. It is analytic in the disc but not square
    summable against the weight. ``normalize`` scales to ``h_0 = 1``;
    otherwise ``h_0 = exp(s alpha (1/a - s))``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not a_mod > 0:
        raise ValueError("a_mod must be positive")
    k = sign * alpha * (1.0 / a_mod - sign)
    # exponent = k / (1 - s z) = k + k s z / (1 - s z)
    u = np.zeros(n_terms, dtype=complex)
    if n_terms > 1:
        u[1:] = k * float(sign) ** np.arange(1, n_terms)
    h = product(binomial_series(sign, alpha - 2.0, n_terms), exponential(u, n_terms), n_terms)
    return h if normalize else h * math.exp(k)


def associate(
    predicted: Sequence[float], observed: Sequence[float]
) -> list[tuple[int, int, float]]:
    """Greedy nearest-match pairing with each side used at most once.

    Returns ``(predicted_index, observed_index, |difference|)`` sorted by
    predicted index; closest pairs are taken first and ties go to the lower
    predicted index.
    """
    pairs = sorted(
        (abs(p - o), i, k) for i, p in enumerate(predicted) for k, o in enumerate(observed)
    )
    used_p: set[int] = set()
    used_o: set[int] = set()
    out = []
    for dist, i, k in pairs:
        if i in used_p or k in used_o:
            continue
        used_p.add(i)
        used_o.add(k)
        out.append((i, k, dist))
    return sorted(out)


def max_relative_deviation(x: CoeffSeq, ref: CoeffSeq) -> float:
    """``max_n |x_n - ref_n| / |ref_n|`` over a common length.

    Entries where both are exactly zero count as agreement; a nonzero
    ``x_n`` against a zero ``ref_n`` gives ``inf``.
    """
    x = to_complex(np.asarray(x))
    ref = to_complex(np.asarray(ref))
    n = min(x.size, ref.size)
    diff = np.abs(x[:n] - ref[:n])
    den = np.abs(ref[:n])
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(diff == 0, 0.0, diff / den)
    return float(np.max(rel)) if n else 0.0


def section_residual(
    w: WeightSequence, a_mod: float, alpha: float, entry: PointEigen, n: int, lam=None
) -> float:
    """``||T h - lam h|| / ||h||`` over rows ``0..n-2`` for the closed-form eigenfunction."""
    t = jacobi_truncation(w, a_mod, n)
    h = to_normalized(w, eigenfunction_closed(alpha, a_mod, entry, n)).real
    lam = entry.lam if lam is None else lam
    res = (t.matvec(h) - lam * h)[:-1]
    return float(np.linalg.norm(res) / np.linalg.norm(h))
