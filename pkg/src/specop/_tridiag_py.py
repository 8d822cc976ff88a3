"""Pure-Python symmetric tridiagonal kernels.

Line-for-line twin of ``_tridiag.pyx``; used when the compiled module is
unavailable or ``SPECOP_PURE_PYTHON`` is set. Inputs are the diagonal ``d``
(length n) and off-diagonal ``e`` (length n - 1) as float64 arrays.
"""
import math

import numpy as np

EPS = 2.220446049250313e-16


def tql_eigenvalues(d, e, tol, max_sweeps):
    """Implicit-shift QL; returns ``(values, achieved, sweeps, converged)``.

    ``achieved`` is the largest neglected off-diagonal divided by the
    infinity norm, which bounds the eigenvalue error by Weyl's inequality.
    """
    n = len(d)
    d = [float(x) for x in d]
    e = [float(x) for x in e] + [0.0]
    norm = inf_norm(d, e[: n - 1])
    if n == 0 or norm == 0.0:
        return np.array(sorted(d)), 0.0, 0, True
    abs_tol = tol * norm
    achieved = 0.0
    sweeps = 0
    converged = True
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                em = abs(e[m])
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
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
    return np.sort(np.array(d)), achieved, sweeps, converged


def inf_norm(d, e):
    n = len(d)
    best = 0.0
    for i in range(n):
        row = abs(d[i])
        if i > 0:
            row += abs(e[i - 1])
        if i < n - 1:
            row += abs(e[i])
        if row > best:
            best = row
    return best


def sturm_count(d, e, x, pivmin):
    """Number of eigenvalues strictly below ``x`` (negative LDL^T pivots)."""
    n = len(d)
    q = d[0] - x
    if q == 0.0:
        q = -pivmin
    count = 1 if q < 0.0 else 0
    for i in range(1, n):
        q = (d[i] - x) - e[i - 1] * e[i - 1] / q
        if q == 0.0:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def bisect_eigenvalues(d, e, indices, lo, hi, width, pivmin):
    """Eigenvalues of the given 0-based indices by Sturm bisection in ``[lo, hi]``."""
    out = np.empty(len(indices))
    for slot, k in enumerate(indices):
        a = lo
        b = hi
        while b - a > width:
            mid = 0.5 * (a + b)
            if mid <= a or mid >= b:
                break
            if sturm_count(d, e, mid, pivmin) > k:
                b = mid
            else:
                a = mid
        out[slot] = 0.5 * (a + b)
    return out
