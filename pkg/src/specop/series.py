"""Dense truncated power series.

A series is a 1-D numpy array of Maclaurin coefficients, ``u[n]`` being the
coefficient of ``z**n``; index -1 reads as 0 everywhere. Arrays are
``complex128`` unless an :mod:`mpmath` number enters the computation, in
which case they are ``object`` arrays of ``mpc`` and every operation here
stays in the active mpmath precision.
"""
from __future__ import annotations

from numbers import Number

import mpmath
import numpy as np

from .weights import WeightSequence

__all__ = [
    "CoeffSeq",
    "as_series",
    "binomial_series",
    "product",
    "exponential",
    "evaluate",
    "weighted_partial_norms",
    "to_complex",
]

CoeffSeq = np.ndarray

_MP_TYPES = (mpmath.mpf, mpmath.mpc)


def _is_mp(*values) -> bool:
    for v in values:
        if isinstance(v, _MP_TYPES):
            return True
        if isinstance(v, np.ndarray) and v.dtype == object:
            return True
    return False


def as_series(coeffs, mp: bool = False) -> CoeffSeq:
    """Coerce ``coeffs`` to a series array (``complex128`` or ``mpc`` objects)."""
    if isinstance(coeffs, np.ndarray) and coeffs.dtype != object and not mp:
        out = coeffs.astype(complex).ravel()
    else:
        flat = list(np.ravel(np.asarray(coeffs, dtype=object)))
        if mp or any(isinstance(c, _MP_TYPES) for c in flat):
            out = np.array([mpmath.mpc(c) for c in flat], dtype=object)
        else:
            out = np.array(flat, dtype=complex)
    if out.size == 0:
        raise ValueError("a series needs at least one coefficient")
    return out


def to_complex(u: CoeffSeq) -> CoeffSeq:
    """Round an mpmath series to ``complex128``."""
    if u.dtype == object:
        return np.array([complex(c) for c in u], dtype=complex)
    return np.asarray(u, dtype=complex)


def _zeros(n: int, mp: bool) -> CoeffSeq:
    if mp:
        return np.array([mpmath.mpc(0)] * n, dtype=object)
    return np.zeros(n, dtype=complex)


def binomial_series(s: Number, e: Number, n_terms: int) -> CoeffSeq:
    """Coefficients of ``(1 - s z)**e``.

    Uses ``u[n+1] = u[n] * (-s) * (e - n) / (n + 1)``, which is exact for
    nonnegative integer ``e`` (the coefficients vanish past ``n = e``).
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    mp = _is_mp(s, e)
    out = _zeros(n_terms, mp)
    one = mpmath.mpc(1) if mp else 1.0 + 0j
    out[0] = one
    c = one
    for n in range(n_terms - 1):
        c = c * (-s) * (e - n) / (n + 1)
        out[n + 1] = c
    return out


def product(u: CoeffSeq, v: CoeffSeq, n_terms: int) -> CoeffSeq:
    """Cauchy product of ``u`` and ``v`` truncated (or zero-padded) to ``n_terms``."""
    mp = _is_mp(u, v)
    u = as_series(u, mp)[:n_terms]
    v = as_series(v, mp)[:n_terms]
    full = np.convolve(u, v)[:n_terms]
    if full.size < n_terms:
        full = np.concatenate((full, _zeros(n_terms - full.size, mp)))
    return full


def exponential(u: CoeffSeq, n_terms: int) -> CoeffSeq:
    """Coefficients of ``exp(u(z))`` for a series with zero constant term.

    With ``e = exp(u)`` one has ``z e' = (z u') e``, i.e.
    ``n e_n = sum_{k=1}^{n} k u_k e_{n-k}``.
    """
    mp = _is_mp(u)
    u = as_series(u, mp)
    if u[0] != 0:
        raise ValueError("exponential() needs a series with zero constant term")
    if u.size < n_terms:
        u = np.concatenate((u, _zeros(n_terms - u.size, mp)))
    ku = u[:n_terms] * np.arange(n_terms)
    e = _zeros(n_terms, mp)
    e[0] = mpmath.mpc(1) if mp else 1.0
    for n in range(1, n_terms):
        # sum_{k=1}^{n} ku[k] * e[n-k]
        e[n] = np.dot(ku[1 : n + 1], e[n - 1 :: -1][:n]) / n
    return e


def evaluate(u: CoeffSeq, z: Number):
    """Horner evaluation of the truncated polynomial at ``z``."""
    acc = 0
    for c in u[::-1]:
        acc = acc * z + c
    return acc


def weighted_partial_norms(u: CoeffSeq, w: WeightSequence) -> np.ndarray:
    """Running sums ``S_N = sum_{n <= N} |u_n|^2 w_n`` (float64, nondecreasing)."""
    u = to_complex(as_series(u))
    omega = w.omegas(u.size)
    return np.cumsum((u.real**2 + u.imag**2) * omega)
