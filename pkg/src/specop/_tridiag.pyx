# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled symmetric tridiagonal kernels (see ``_tridiag_py`` for the reference)."""
import numpy as np

from libc.math cimport fabs, hypot, copysign

cdef double EPS = 2.220446049250313e-16


cdef double _inf_norm(const double[::1] d, const double[::1] e, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double row, best = 0.0
    for i in range(n):
        row = fabs(d[i])
        if i > 0:
            row += fabs(e[i - 1])
        if i < n - 1:
            row += fabs(e[i])
        if row > best:
            best = row
    return best


def inf_norm(d, e):
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(np.append(np.asarray(e, dtype=np.float64), 0.0))
    return _inf_norm(dv, ev, dv.shape[0])


def tql_eigenvalues(d_in, e_in, double tol, int max_sweeps):
    """Implicit-shift QL; returns ``(values, achieved, sweeps, converged)``."""
    cdef Py_ssize_t n = len(d_in)
    d_arr = np.array(d_in, dtype=np.float64)
    e_arr = np.zeros(max(n, 1), dtype=np.float64)
    if n > 1:
        e_arr[: n - 1] = np.asarray(e_in, dtype=np.float64)
    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double norm = _inf_norm(d, e, n)
    if n == 0 or norm == 0.0:
        return np.sort(d_arr), 0.0, 0, True
    cdef double abs_tol = tol * norm
    cdef double achieved = 0.0
    cdef long sweeps = 0
    cdef bint converged = True
    cdef bint underflow
    cdef Py_ssize_t l, m, i
    cdef int it
    cdef double dd, em, g, r, s, c, p, f, b
    with nogil:
        for l in range(n):
            it = 0
            while True:
                m = l
                while m < n - 1:
                    dd = fabs(d[m]) + fabs(d[m + 1])
                    em = fabs(e[m])
                    if em <= EPS * dd or em <= abs_tol:
                        if em / norm > achieved:
                            achieved = em / norm
                        break
                    m += 1
                if m == l:
                    break
                if it == max_sweeps:
                    converged = False
                    break
                it += 1
                sweeps += 1
                g = (d[l + 1] - d[l]) / (2.0 * e[l])
                r = hypot(g, 1.0)
                g = d[m] - d[l] + e[l] / (g + copysign(r, g))
                s = 1.0
                c = 1.0
                p = 0.0
                i = m - 1
                underflow = False
                while i >= l:
                    f = s * e[i]
                    b = c * e[i]
                    r = hypot(f, g)
                    e[i + 1] = r
                    if r == 0.0:
                        d[i + 1] -= p
                        e[m] = 0.0
                        underflow = True
                        break
                    s = f / r
                    c = g / r
                    g = d[i + 1] - p
                    r = (d[i] - g) * s + 2.0 * c * b
                    p = s * r
                    d[i + 1] = g + p
                    g = c * r - b
                    i -= 1
                if underflow:
                    continue
                d[l] -= p
                e[l] = g
                e[m] = 0.0
            if not converged:
                break
    return np.sort(d_arr), achieved, sweeps, bool(converged)


cdef Py_ssize_t _sturm(const double[::1] d, const double[::1] e, Py_ssize_t n,
                       double x, double pivmin) noexcept nogil:
    cdef Py_ssize_t i, count = 0
    cdef double q = d[0] - x
    if q == 0.0:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q
        if q == 0.0:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(d, e, double x, double pivmin):
    """Number of eigenvalues strictly below ``x`` (negative LDL^T pivots)."""
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(np.append(np.asarray(e, dtype=np.float64), 0.0))
    return _sturm(dv, ev, dv.shape[0], x, pivmin)


def bisect_eigenvalues(d, e, indices, double lo, double hi, double width, double pivmin):
    """Eigenvalues of the given 0-based indices by Sturm bisection in ``[lo, hi]``."""
    cdef const double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(np.append(np.asarray(e, dtype=np.float64), 0.0))
    cdef const long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t n = dv.shape[0], slot, k
    out_arr = np.empty(idx.shape[0], dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double a, b, mid
    with nogil:
        for slot in range(idx.shape[0]):
            k = idx[slot]
            a = lo
            b = hi
            while b - a > width:
                mid = 0.5 * (a + b)
                if mid <= a or mid >= b:
                    break
                if _sturm(dv, ev, n, mid, pivmin) > k:
                    b = mid
                else:
                    a = mid
            out[slot] = 0.5 * (a + b)
    return out_arr
