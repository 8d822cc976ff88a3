"""Compiled versus pure-Python tridiagonal kernels.

Run with ``python3 benchmarks/bench_kernels.py [--sizes 100,400,1600]``.
Both backends are timed on the same Jacobi sections of V_a (alpha = -1,
a = 0.5) and their eigenvalues are compared.
"""
import argparse
import time

import numpy as np

from specop import BergmanType, jacobi_truncation, make_weight
from specop import _tridiag_py
from specop.eigensolve import MAX_SWEEPS, STURM_PIVOT

try:
    from specop import _tridiag
except ImportError:  # extension not built
    _tridiag = None


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="100,400,1600")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    if _tridiag is None:
        raise SystemExit("compiled backend unavailable; build with pip install -e .")
    w = make_weight(BergmanType(-1.0))
    print(f"{'n':>6} {'kernel':>10} {'cython s':>10} {'python s':>10} {'speedup':>8} {'max |diff|':>11}")
    for n in (int(s) for s in args.sizes.split(",")):
        t = jacobi_truncation(w, 0.5, n)
        d, e = t.diag, t.offdiag
        pivmin = STURM_PIVOT * t.norm_inf()
        idx = np.arange(min(n, 20))
        lo, hi = -1.0, 3.0
        cases = {
            "tql": lambda m: m.tql_eigenvalues(d, e, 1e-13, MAX_SWEEPS)[0],
            "sturm": lambda m: np.array([m.sturm_count(d, e, x, pivmin) for x in np.linspace(0, 2.5, 50)]),
            "bisect": lambda m: m.bisect_eigenvalues(d, e, idx, lo, hi, 1e-12 * t.norm_inf(), pivmin),
        }
        for name, fn in cases.items():
            tc, vc = best_of(lambda: fn(_tridiag), args.repeat)
            tp, vp = best_of(lambda: fn(_tridiag_py), args.repeat)
            diff = float(np.max(np.abs(np.asarray(vc, float) - np.asarray(vp, float))))
            print(f"{n:>6} {name:>10} {tc:>10.4f} {tp:>10.4f} {tp / tc:>8.1f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
