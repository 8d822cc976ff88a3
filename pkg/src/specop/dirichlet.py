"""Hypergeometric series and the candidate eigenfunction for Dirichlet-type weights.

On ``w_n = binom(n + alpha, n)`` with ``alpha > 0`` an eigenfunction of
``V_a`` (``a > 0``) must solve the first-order equation::

    z P(z) h' + h (alpha - (b + alpha/a) z + 2 z^2) = alpha h(0),
    P(z) = z^2 - b z + 1,  b = (a^2 + 1 - lam) / a.

With ``c`` the root of ``P`` of modulus at least one and
``mu = 1 + (alpha/a)(a - c)/(c^2 - 1)``, ``nu = 2 - alpha - mu``, the
solution regular at the origin with ``h(0) = 1`` is::

    h(z) = F1(alpha; 1 - mu, 1 - nu; alpha + 1; z/c, c z) (1 - z/c)^{-mu} (1 - c z)^{-nu}.

Whether ``h`` has finite norm for some ``lam`` is an open question; the norm
routines here are diagnostics only.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .pointspec import DegenerateParameterError, recurrence_precision
from .series import CoeffSeq, _is_mp, _zeros, binomial_series, product, to_complex
from .weights import DirichletBinomial, make_weight

__all__ = [
    "OdeParams",
    "NormDiagnostic",
    "UnsupportedCaseError",
    "pochhammer",
    "gauss_2f1",
    "appell_f1",
    "appell_f1_series",
    "dirichlet_params",
    "dirichlet_candidate",
    "ode_residual",
    "dirichlet_norm_diagnostic",
]

DEGENERATE_TOL = 1e-12


class UnsupportedCaseError(DegenerateParameterError):
    """``nu = 0``, for which the integration step does not apply."""


def _check_zeta(zeta) -> None:
    z = complex(zeta)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError(f"zeta must not be a nonpositive integer, got {zeta}")


def pochhammer(beta, n: int):
    """Rising factorial ``(beta)_n`` by ``(beta)_{k+1} = (beta)_k (beta + k)``."""
    out = 1
    for k in range(n):
        out = out * (beta + k)
    return out


def gauss_2f1(beta, gamma, zeta, n_terms: int) -> CoeffSeq:
    """Coefficients ``(beta)_n (gamma)_n / ((zeta)_n n!)`` of 2F1(beta, gamma; zeta; z)."""
    _check_zeta(zeta)
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    mp = _is_mp(beta, gamma, zeta)
    out = _zeros(n_terms, mp)
    t = mpmath.mpc(1) if mp else 1.0 + 0j
    out[0] = t
    for n in range(n_terms - 1):
        t = t * (beta + n) * (gamma + n) / ((zeta + n) * (n + 1))
        out[n + 1] = t
    return out


def appell_f1_series(beta, gamma, gamma_p, zeta, p, q, n_terms: int) -> CoeffSeq:
    """Coefficients in ``z`` of F1(beta; gamma, gamma'; zeta; p z, q z).

    Coefficient ``k`` is ``(beta)_k / (zeta)_k`` times the coefficient of
    ``z^k`` in ``(1 - p z)^{-gamma} (1 - q z)^{-gamma'}``.
    """
    _check_zeta(zeta)
    inner = product(binomial_series(p, -gamma, n_terms), binomial_series(q, -gamma_p, n_terms), n_terms)
    ratio = mpmath.mpc(1) if _is_mp(inner) else 1.0 + 0j
    out = _zeros(n_terms, _is_mp(inner))
    for k in range(n_terms):
        out[k] = ratio * inner[k]
        ratio = ratio * (beta + k) / (zeta + k)
    return out


def appell_f1(beta, gamma, gamma_p, zeta, x, y, n_terms: int, with_tail: bool = False):
    """Truncated double series of F1 over ``m + n < n_terms``.

    With ``with_tail`` also returns an estimate of the omitted part: the last
    total-degree block times ``q / (1 - q)``, where ``q`` is the larger of
    ``max(|x|, |y|)`` and the ratio of the last two blocks (``inf`` if
    ``q >= 1``).
    """
    _check_zeta(zeta)
    if not (abs(x) < 1 and abs(y) < 1):
        raise ValueError("F1 series needs |x| < 1 and |y| < 1")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    # by total degree k: (beta)_k/(zeta)_k * sum_{m+n=k} (gamma)_m (gamma')_n x^m y^n / (m! n!)
    gx = binomial_series(x, -gamma, n_terms)
    gy = binomial_series(y, -gamma_p, n_terms)
    total = 0
    blocks = []
    ratio = 1
    for k in range(n_terms):
        block = ratio * np.dot(gx[: k + 1], gy[k::-1])
        blocks.append(abs(block))
        total = total + block
        ratio = ratio * (beta + k) / (zeta + k)
    if not with_tail:
        return total
    rho = max(abs(x), abs(y))
    if len(blocks) >= 2 and blocks[-2] > 0:
        rho = max(rho, float(blocks[-1] / blocks[-2]))
    tail = float(blocks[-1]) * rho / (1 - rho) if rho < 1 else math.inf
    return total, tail


@dataclass(frozen=True)
class OdeParams:
    """Parameters of the equation for given ``(alpha, a, lam)``.

    ``c`` is the root of ``z^2 - b z + 1`` with ``|c| >= 1`` (the one with
    nonnegative imaginary part when both lie on the circle).
    """

    alpha: float
    a_mod: float
    lam: float
    b: float
    c: complex
    mu: complex
    nu: complex


def _params(alpha, a_mod, lam, mp: bool):
    if mp:
        alpha, a_mod, lam = mpmath.mpf(alpha), mpmath.mpf(a_mod), mpmath.mpf(lam)
        sqrt = lambda v: mpmath.sqrt(mpmath.mpc(v))
    else:
        sqrt = lambda v: cmath.sqrt(v)
    b = (a_mod * a_mod + 1 - lam) / a_mod
    d = sqrt(b * b - 4)
    c = (b + d) / 2
    if abs(c) < 1 or (abs(abs(c) - 1) < 1e-15 and complex(c).imag < 0):
        c = (b - d) / 2
    mu = 1 + (alpha / a_mod) * (a_mod - c) / (c * c - 1)
    nu = 2 - alpha - mu
    return b, c, mu, nu


def dirichlet_params(alpha: float, a_mod: float, lam: float) -> OdeParams:
    """``b``, ``c``, ``mu``, ``nu`` for the Dirichlet-type equation.

    Raises
    ------
    DegenerateParameterError
        If ``|b -+ 2| < 1e-12`` (double root ``c = +-1``).
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if not a_mod > 0:
        raise ValueError("a_mod must be positive")
    b = (a_mod * a_mod + 1.0 - lam) / a_mod
    if abs(b - 2.0) < DEGENERATE_TOL or abs(b + 2.0) < DEGENERATE_TOL:
        root = 1 if b > 0 else -1
        raise DegenerateParameterError(f"double root c = {root} (b = {b!r})")
    b, c, mu, nu = _params(alpha, a_mod, lam, mp=False)
    return OdeParams(float(alpha), float(a_mod), float(lam), float(b), complex(c), complex(mu), complex(nu))


def _candidate_mp(alpha, a_mod, lam, n_terms: int, dps: int) -> CoeffSeq:
    with mpmath.workdps(dps):
        _, c, mu, nu = _params(alpha, a_mod, lam, mp=True)
        al = mpmath.mpf(alpha)
        f = appell_f1_series(al, 1 - mu, 1 - nu, al + 1, 1 / c, c, n_terms)
        h = product(f, binomial_series(1 / c, -mu, n_terms), n_terms)
        return product(h, binomial_series(c, -nu, n_terms), n_terms)


def dirichlet_candidate(
    alpha: float, a_mod: float, lam: float, n_terms: int, as_mp: bool = False
) -> CoeffSeq:
    """Coefficients of the candidate eigenfunction with ``h(0) = 1``.

    The F1 series and the two binomial factors carry terms of size up to
    ``|c|^n`` that cancel in the product, so the construction runs in
    mpmath, doubling the working precision until two consecutive runs agree
    to about 18 digits in every coefficient. ``as_mp`` returns the final
    ``mpc`` coefficients instead of rounding to ``complex128``.

    Raises
    ------
    DegenerateParameterError
        Double root ``c = +-1``.
    UnsupportedCaseError
        ``nu = 0``.
    """
    p = dirichlet_params(alpha, a_mod, lam)
    if abs(p.nu) < DEGENERATE_TOL:
        raise UnsupportedCaseError("nu = 0 is not covered by the integration step")
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    grow = math.log10(max(abs(p.c), 1.0))
    dps = 30 + int(math.ceil(2 * n_terms * grow))
    prev = _candidate_mp(alpha, a_mod, lam, n_terms, dps)
    for _ in range(6):
        dps *= 2
        cur = _candidate_mp(alpha, a_mod, lam, n_terms, dps)
        with mpmath.workdps(dps):
            scale = mpmath.mpf(0)
            ok = True
            for x, y in zip(prev, cur):
                scale = max(scale, abs(y))
                if abs(x - y) > mpmath.mpf(10) ** -18 * (abs(y) + mpmath.mpf(10) ** -18 * scale):
                    ok = False
                    break
        if ok:
            return cur if as_mp else to_complex(cur)
        prev = cur
    raise ArithmeticError("candidate coefficients did not stabilize under precision doubling")


def ode_residual(params: OdeParams, h: CoeffSeq) -> float:
    """Largest coefficient of ``z P h' + h (alpha - (b + alpha/a) z + 2 z^2) - alpha h(0)``.

    Coefficients ``k < len(h)`` are exact for the truncated input. For an
    ``mpc`` series the expression is evaluated in mpmath with ``b`` rebuilt
    from ``(alpha, a, lam)`` at a precision that covers the size of ``h``,
    so the result measures the series itself rather than rounding in the
    parameters.
    """
    n = len(h)
    if _is_mp(h):
        size = max(float(mpmath.log10(max(abs(x) for x in h) + 1)), 0.0)
        dps = max(mpmath.mp.dps, 40 + int(size) + len(str(n)))
        with mpmath.workdps(dps):
            al = mpmath.mpf(params.alpha)
            am = mpmath.mpf(params.a_mod)
            b = (am * am + 1 - mpmath.mpf(params.lam)) / am
            return float(_residual_coeffs(h, al, am, b, n))
    return float(_residual_coeffs(np.asarray(h, dtype=complex), params.alpha, params.a_mod, params.b, n))


def _residual_coeffs(h, al, am, b, n):
    k = np.arange(n)
    dh = h[1:] * k[1:]  # dh[m] = coefficient m of h'
    worst = 0
    for m in range(n):
        # z P h' = z^3 h' - b z^2 h' + z h'
        t = al * h[m]
        if m >= 1:
            t = t + dh[m - 1] - (b + al / am) * h[m - 1]
        if m >= 2:
            t = t - b * dh[m - 2] + 2 * h[m - 2]
        if m >= 3:
            t = t + dh[m - 3]
        if m == 0:
            t = t - al * h[0]
        worst = max(worst, abs(t))
    return worst


@dataclass(frozen=True)
class NormDiagnostic:
    """Growth of the weighted partial norms of the candidate.

    ``log10_partial[N]`` is ``log10 sum_{n <= N} |h_n|^2 w_n``. The slope is
    the least-squares growth of that curve per term over the second half of
    the range, and ``last_increment`` is the share of the final partial sum
    contributed by the last term. These are reported, never judged.
    """

    log10_partial: np.ndarray
    slope: float
    last_increment: float
    label: str = "diagnostic"


def dirichlet_norm_diagnostic(alpha: float, a_mod: float, lam: float, n_terms: int) -> NormDiagnostic:
    """Weighted partial norms of the candidate under ``w_n = binom(n + alpha, n)``.

    The coefficients come from the three-term relation, which has the
    candidate as its unique solution with ``h(0) = 1``; it is run in mpmath
    with enough digits to follow the recessive solution when ``|c| > 1``, and
    sums are kept in log scale because they can exceed the double range.
    """
    p = dirichlet_params(alpha, a_mod, lam)
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    w = make_weight(DirichletBinomial(alpha))
    dps = recurrence_precision(1.0 / max(abs(p.c), 1.0), n_terms)
    out = np.empty(n_terms)
    with mpmath.workdps(dps):
        a = mpmath.mpf(a_mod)
        lm = mpmath.mpf(lam)
        prev, cur = mpmath.mpf(0), mpmath.mpf(1)
        omega = mpmath.mpf(1)
        total = mpmath.mpf(1)
        out[0] = 0.0
        last = mpmath.mpf(1)
        for n in range(n_terms - 1):
            rn = w.ratio_mp(n)
            prev, cur = cur, ((a * a + rn - lm) * cur - a * prev) / (a * rn)
            omega *= rn
            last = cur * cur * omega
            total += last
            out[n + 1] = float(mpmath.log10(total))
        share = float(last / total)
    half = n_terms // 2
    if n_terms - half >= 2:
        xs = np.arange(half, n_terms)
        slope = float(np.polyfit(xs, out[half:], 1)[0])
    else:
        slope = 0.0
    return NormDiagnostic(out, slope, share)
