"""The operator V_a = M*_{a-z} M_{a-z} and its finite Jacobi sections.

Coefficient sequences ``h`` are Maclaurin coefficients. In the orthonormal
basis ``z^n / sqrt(w_n)`` the operator is a Jacobi matrix with diagonal
``|a|^2 + r_n`` and off-diagonal ``-a sqrt(r_n)`` once ``a`` has been
rotated onto the positive axis, which is a unitary change of variables
``f(z) -> f(e^{i theta} z)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .series import CoeffSeq, as_series, to_complex
from .weights import WeightSequence, validity_report

__all__ = [
    "SymTridiag",
    "GaugeResult",
    "apply_Va",
    "apply_poly_V",
    "inner_check",
    "inner_defect",
    "jacobi_truncation",
    "gauge_reduce",
    "section",
    "essential_interval",
    "hs_perturbation_sums",
    "hs_first_sum_tail_bound",
    "to_normalized",
    "from_normalized",
]


@dataclass(frozen=True)
class SymTridiag:
    """Real symmetric tridiagonal matrix held as its two diagonals."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.ascontiguousarray(self.diag, dtype=float)
        e = np.ascontiguousarray(self.offdiag, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("diag must be a nonempty 1-D sequence")
        if e.shape != (d.size - 1,):
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def norm_inf(self) -> float:
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        y = self.diag * x
        y[:-1] += self.offdiag * x[1:]
        y[1:] += self.offdiag * x[:-1]
        return y

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def leading(self, m: int) -> "SymTridiag":
        """The m x m leading principal submatrix."""
        return SymTridiag(self.diag[:m], self.offdiag[: m - 1])


@dataclass(frozen=True)
class GaugeResult:
    modulus: float
    phase: float

    def reconstruct(self) -> complex:
        return cmath.rect(self.modulus, self.phase)


def gauge_reduce(a) -> GaugeResult:
    """Polar form of ``a`` with phase in ``[0, 2 pi)``.

    ``a`` may also be given as a ``(modulus, phase)`` pair, which is passed
    through without recomputing the modulus.
    """
    if isinstance(a, tuple):
        modulus, phase = map(float, a)
        if modulus < 0:
            raise ValueError("modulus must be nonnegative")
    else:
        a = complex(a)
        modulus = abs(a)
        phase = cmath.phase(a) if modulus else 0.0
    phase = math.fmod(phase, 2 * math.pi)
    if phase < 0:
        phase += 2 * math.pi
    if phase >= 2 * math.pi:
        phase = 0.0
    return GaugeResult(modulus, phase)


def essential_interval(a) -> tuple[float, float]:
    """``[(1 - |a|)^2, (1 + |a|)^2]``."""
    m = gauge_reduce(a).modulus
    return (1.0 - m) ** 2, (1.0 + m) ** 2


def apply_Va(w: WeightSequence, a: Number, h: CoeffSeq) -> CoeffSeq:
    """Coefficients of ``V_a h`` for a truncated ``h``.

    ``(V_a h)_n = |a|^2 h_n - a r_n h_{n+1} - conj(a) h_{n-1} + r_n h_n``;
    ``h_N`` is taken as zero, so only rows ``n < N - 1`` are exact images of
    the untruncated function.
    """
    h = to_complex(as_series(h))
    a = complex(a)
    r = w.ratios(h.size)
    h_next = np.append(h[1:], 0.0)
    h_prev = np.insert(h[:-1], 0, 0.0)
    return (abs(a) ** 2 + r) * h - a * r * h_next - a.conjugate() * h_prev


def apply_poly_V(w: WeightSequence, f: CoeffSeq, h: CoeffSeq) -> CoeffSeq:
    """Coefficients of ``M*_f M_f h`` for a polynomial symbol ``f``.

    ``M_f h`` is the full Cauchy product (length ``N + deg f``) and
    ``(M*_f g)_n = sum_k conj(f_k) g_{n+k} w_{n+k} / w_n``, returned for
    ``n < N``.
    """
    f = to_complex(as_series(f))
    h = to_complex(as_series(h))
    N, deg = h.size, f.size - 1
    g = np.convolve(f, h)
    omega = w.omegas(N + deg)
    gw = g * omega
    out = np.zeros(N, dtype=complex)
    fc = f.conj()
    for k in range(deg + 1):
        out += fc[k] * gw[k : k + N]
    return out / omega[:N]


def inner_check(w: WeightSequence, f: CoeffSeq, tol: float = 1e-10) -> bool:
    """True iff ``M*_f M_f 1 = 1`` to within ``tol`` in the sup norm."""
    return bool(np.max(np.abs(inner_defect(w, f))) <= tol)


def inner_defect(w: WeightSequence, f: CoeffSeq) -> CoeffSeq:
    """``M*_f M_f 1 - 1``; supported on ``n <= deg f``, so this is exact."""
    f = to_complex(as_series(f))
    one = np.zeros(f.size, dtype=complex)
    one[0] = 1.0
    return apply_poly_V(w, f, one) - one


def jacobi_truncation(w: WeightSequence, a: float, n: int) -> SymTridiag:
    """The ``n x n`` section of ``V_a`` for real ``a >= 0`` in the normalized basis."""
    if isinstance(a, complex) or (isinstance(a, np.ndarray) and np.iscomplexobj(a)):
        raise TypeError("jacobi_truncation needs a real modulus; gauge complex a first")
    a = float(a)
    if a < 0:
        raise ValueError("jacobi_truncation needs a >= 0; gauge negative a first")
    if n < 1:
        raise ValueError("section dimension must be at least 1")
    r = w.ratios(n)
    return SymTridiag(a * a + r, -a * np.sqrt(r[:-1]))


def section(w: WeightSequence, a, n: int) -> tuple[SymTridiag, GaugeResult]:
    """Gauge ``a`` onto the positive axis and build the ``n x n`` section."""
    g = gauge_reduce(a)
    return jacobi_truncation(w, g.modulus, n), g


def to_normalized(w: WeightSequence, h: CoeffSeq) -> np.ndarray:
    """Coordinates ``h_n sqrt(w_n)`` in the orthonormal monomial basis."""
    h = to_complex(as_series(h))
    return h * np.sqrt(w.omegas(h.size))


def from_normalized(w: WeightSequence, c: np.ndarray) -> CoeffSeq:
    c = np.asarray(c, dtype=complex)
    return c / np.sqrt(w.omegas(c.size))


def hs_perturbation_sums(w: WeightSequence, a: float, n_terms: int) -> tuple[float, float]:
    """``(2 a^2 sum (1 - sqrt r_n)^2, sum (1 - r_n)^2)`` over ``n < n_terms``.

    Together finite, they make the section matrix a Hilbert-Schmidt
    perturbation of a scaled free Jacobi matrix.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    r = w.ratios(n_terms)
    first = 2.0 * a * a * math.fsum((1.0 - np.sqrt(r)) ** 2)
    second = math.fsum((1.0 - r) ** 2)
    return first, second


def hs_first_sum_tail_bound(w: WeightSequence, a: float, n_terms: int) -> float:
    """Bound on the tail of the first sum beyond ``n_terms`` terms.

    ``(1 - sqrt r)^2 = (1 - r)^2 / (1 + sqrt r)^2 <= (1 - r)^2``.
    """
    return 2.0 * a * a * validity_report(w, n_terms).tail_bound
