"""Weight sequences for weighted Hardy spaces on the unit disc.

A weight is stored through its consecutive ratios ``r_n = w_{n+1} / w_n``;
the weights themselves are recovered as running products with ``w_0 = 1``.
Binomial closed forms overflow long before the ratios do, so nothing here
ever evaluates a binomial coefficient directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import mpmath
import numpy as np
from scipy import integrate

__all__ = [
    "BergmanType",
    "DirichletPower",
    "DirichletBinomial",
    "Custom",
    "WeightKind",
    "WeightError",
    "WeightSequence",
    "ValidityReport",
    "make_weight",
    "ratio",
    "validity_report",
    "kernel_diag",
    "parse_space",
]

# beyond this index omegas() accumulates logs instead of multiplying ratios
_LOG_SPACE_THRESHOLD = 100_000


class WeightError(ValueError):
    """Raised for weight parameters outside the admissible range."""


@dataclass(frozen=True)
class BergmanType:
    """``w_n = binom(n - alpha, n)^{-1}``; Bergman for alpha=-1, Hardy for alpha=0."""

    alpha: float

    @property
    def descriptor(self) -> str:
        return f"bergman:{self.alpha!r}"


@dataclass(frozen=True)
class DirichletPower:
    """``w_n = (n + 1)^alpha``."""

    alpha: float

    @property
    def descriptor(self) -> str:
        return f"dirichlet-pow:{self.alpha!r}"


@dataclass(frozen=True)
class DirichletBinomial:
    """``w_n = binom(n + alpha, n)``, the Dirichlet-type norm used for alpha > 0."""

    alpha: float

    @property
    def descriptor(self) -> str:
        return f"dirichlet-binom:{self.alpha!r}"


@dataclass(frozen=True)
class Custom:
    """User-supplied ratio generator ``n -> w_{n+1} / w_n``."""

    ratio: Callable[[int], float]
    name: str = "custom"

    @property
    def descriptor(self) -> str:
        return self.name


WeightKind = Union[BergmanType, DirichletPower, DirichletBinomial, Custom]


@dataclass(frozen=True)
class WeightSequence:
    """A positive weight sequence with ``w_0 = 1``, addressed by its ratios."""

    kind: WeightKind

    @property
    def closed_form(self) -> bool:
        return not isinstance(self.kind, Custom)

    @property
    def descriptor(self) -> str:
        return self.kind.descriptor

    def ratio(self, n: int) -> float:
        """``r_n = w_{n+1} / w_n`` for ``n >= 0``."""
        if n < 0:
            raise IndexError("ratio index must be nonnegative")
        kind = self.kind
        if isinstance(kind, BergmanType):
            return (n + 1.0) / (n + 1.0 - kind.alpha)
        if isinstance(kind, DirichletPower):
            return ((n + 2.0) / (n + 1.0)) ** kind.alpha
        if isinstance(kind, DirichletBinomial):
            return (n + 1.0 + kind.alpha) / (n + 1.0)
        return float(kind.ratio(n))

    def ratio_mp(self, n: int):
        """Ratio evaluated in the current :mod:`mpmath` context.

        The parameter ``alpha`` is taken as the exact binary value of the
        stored float, so closed-form kinds agree with :meth:`ratio` to the
        last bit of the double result.
        """
        kind = self.kind
        if isinstance(kind, BergmanType):
            return mpmath.mpf(n + 1) / (n + 1 - mpmath.mpf(kind.alpha))
        if isinstance(kind, DirichletPower):
            return (mpmath.mpf(n + 2) / (n + 1)) ** mpmath.mpf(kind.alpha)
        if isinstance(kind, DirichletBinomial):
            return (n + 1 + mpmath.mpf(kind.alpha)) / (n + 1)
        return mpmath.mpf(kind.ratio(n))

    def ratios(self, n_terms: int) -> np.ndarray:
        """Vector ``[r_0, ..., r_{n_terms-1}]``."""
        n = np.arange(n_terms, dtype=float)
        kind = self.kind
        if isinstance(kind, BergmanType):
            return (n + 1.0) / (n + 1.0 - kind.alpha)
        if isinstance(kind, DirichletPower):
            return ((n + 2.0) / (n + 1.0)) ** kind.alpha
        if isinstance(kind, DirichletBinomial):
            return (n + 1.0 + kind.alpha) / (n + 1.0)
        return np.array([float(kind.ratio(k)) for k in range(n_terms)])

    def omegas(self, n_terms: int) -> np.ndarray:
        """Vector ``[w_0, ..., w_{n_terms-1}]`` from the running ratio product."""
        if n_terms <= 0:
            return np.zeros(0)
        r = self.ratios(n_terms - 1)
        if n_terms <= _LOG_SPACE_THRESHOLD:
            return np.concatenate(([1.0], np.cumprod(r)))
        # compensated running sum of log-ratios keeps the drift at O(eps)
        logs = np.log(r)
        out = np.empty(n_terms)
        out[0] = 0.0
        s = c = 0.0
        for k, x in enumerate(logs, start=1):
            y = x - c
            t = s + y
            c = (t - s) - y
            s = t
            out[k] = s
        return np.exp(out)

    def omega(self, n: int) -> float:
        return float(self.omegas(n + 1)[-1])


@dataclass(frozen=True)
class ValidityReport:
    partial_sum: float
    tail_bound: float
    is_valid: bool
    c0: float
    c1: float
    ratio_limit_gap: float
    n_terms: int
    monotone: str
    heuristic: bool
    reason: str = ""


def make_weight(kind: WeightKind) -> WeightSequence:
    """Build a :class:`WeightSequence`, rejecting inadmissible parameters."""
    if isinstance(kind, BergmanType):
        if not kind.alpha < 1:
            raise WeightError(
                f"BergmanType needs alpha < 1 (got {kind.alpha}); "
                "the ratio (n+1)/(n+1-alpha) breaks down at n = alpha - 1"
            )
    elif isinstance(kind, DirichletPower):
        if not math.isfinite(kind.alpha):
            raise WeightError("DirichletPower alpha must be finite")
    elif isinstance(kind, DirichletBinomial):
        if not kind.alpha > -1:
            raise WeightError(f"DirichletBinomial needs alpha > -1 (got {kind.alpha})")
    elif isinstance(kind, Custom):
        if not callable(kind.ratio):
            raise WeightError("Custom weight needs a callable ratio generator")
    else:
        raise TypeError(f"unknown weight kind {kind!r}")
    return WeightSequence(kind)


def ratio(w: WeightSequence, n: int) -> float:
    return w.ratio(n)


def _tail_bound(w: WeightSequence, n_terms: int, r: np.ndarray) -> tuple[float, bool]:
    """Upper bound for ``sum_{n >= n_terms} (1 - r_n)^2``.

    Every closed-form family has ``(1 - r_n)^2`` decreasing in ``n``, so the
    tail is dominated by the integral over ``[n_terms - 1, inf)``.
    """
    kind = w.kind
    N = n_terms
    if isinstance(kind, BergmanType):
        a = kind.alpha
        if a == 0:
            return 0.0, False
        return a * a / (N - a), False
    if isinstance(kind, DirichletBinomial):
        a = kind.alpha
        return a * a / N, False
    if isinstance(kind, DirichletPower):
        a = kind.alpha
        if a == 0:
            return 0.0, False
        # expm1/log1p avoid cancellation when the gap is small
        f = lambda x: math.expm1(a * math.log1p(1.0 / (x + 1.0))) ** 2
        val, _ = integrate.quad(f, N - 1, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
        return val, False
    # Custom: assume the gap decays like 1/n and extrapolate from the last term
    last = (1.0 - r[-1]) ** 2
    return last * N, True


def validity_report(w: WeightSequence, n_terms: int) -> ValidityReport:
    """Certify the standing assumptions on ``w`` over ``n < n_terms``.

    ``c0 = sup r_n`` and ``c1 = sup 1/r_n``. Both suprema are attained at
    ``n = 0`` or in the limit ``r_n -> 1`` for every monotone closed-form
    family, so the checked range already gives the exact values; for
    :class:`Custom` weights they are lower bounds and ``heuristic`` is set.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    r = w.ratios(n_terms)
    if np.any(~np.isfinite(r)) or np.any(r <= 0):
        return ValidityReport(
            math.nan, math.inf, False, math.nan, math.nan, math.nan, n_terms,
            "none", not w.closed_form, "nonpositive or non-finite ratio",
        )
    gaps = 1.0 - r
    partial = math.fsum(gaps * gaps)
    if np.all(r <= 1.0):
        monotone = "non-increasing"
    elif np.all(r >= 1.0):
        monotone = "non-decreasing"
    else:
        monotone = "none"
    tail, heuristic = _tail_bound(w, n_terms, r)
    c0 = max(1.0, float(r.max()))
    c1 = max(1.0, float((1.0 / r).max()))
    reason = ""
    if monotone == "none":
        reason = f"ratios cross 1 within the first {n_terms} terms"
    elif not math.isfinite(tail):
        reason = "tail bound is not finite"
    elif heuristic:
        reason = f"checked up to n = {n_terms - 1}; tail extrapolated"
    return ValidityReport(
        partial_sum=partial,
        tail_bound=tail,
        is_valid=monotone != "none" and math.isfinite(tail),
        c0=c0,
        c1=c1,
        ratio_limit_gap=abs(float(gaps[-1])),
        n_terms=n_terms,
        monotone=monotone,
        heuristic=heuristic,
        reason=reason,
    )


def kernel_diag(w: WeightSequence, r: float, n_terms: int) -> float:
    """Truncated reproducing-kernel diagonal ``sum_{j < n_terms} r^{2j} / w_j``."""
    if not 0 <= r < 1:
        raise ValueError("kernel_diag needs 0 <= r < 1")
    ratios = w.ratios(max(n_terms - 1, 0))
    terms = np.empty(n_terms)
    term = 1.0
    for j in range(n_terms):
        terms[j] = term
        if j < n_terms - 1:
            term = term * r * r / ratios[j]
    return math.fsum(terms)


_SPACE_KINDS = {
    "bergman": BergmanType,
    "dirichlet-pow": DirichletPower,
    "dirichlet-binom": DirichletBinomial,
}


def parse_space(text: str) -> WeightSequence:
    """Parse ``family:ALPHA`` (``bergman``, ``dirichlet-pow``, ``dirichlet-binom``)."""
    family, sep, value = text.partition(":")
    if not sep or family not in _SPACE_KINDS:
        raise WeightError(
            f"bad space {text!r}; expected one of "
            + ", ".join(f"{k}:ALPHA" for k in _SPACE_KINDS)
        )
    try:
        alpha = float(value)
    except ValueError:
        raise WeightError(f"bad ALPHA in space {text!r}") from None
    return make_weight(_SPACE_KINDS[family](alpha))
