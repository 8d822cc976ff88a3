import json
import os
import subprocess
import sys

import numpy as np
import pytest

from specop import BergmanType, make_weight
from specop import _tridiag_py as py
from specop import eigensolve
from specop.operator import jacobi_truncation

cy = pytest.importorskip("specop._tridiag", reason="compiled kernels not built")


def sections():
    for alpha, a, n in [(-1.0, 0.5, 300), (0.5, 2.0, 257), (0.0, 1.0, 64), (-2.0, 0.9, 5), (0.75, 0.3, 1)]:
        t = jacobi_truncation(make_weight(BergmanType(alpha)), a, n)
        yield np.ascontiguousarray(t.diag), np.ascontiguousarray(t.offdiag)
    rng = np.random.default_rng(3)
    for n in (2, 7, 40):
        yield rng.normal(size=n), rng.normal(size=n - 1)


def test_compiled_backend_selected_by_default():
    assert eigensolve.BACKEND == "cython"


@pytest.mark.parametrize("k", range(8))
def test_tql_parity(k):
    d, e = list(sections())[k]
    vc, ac, sc, okc = cy.tql_eigenvalues(d, e, 1e-13, 50)
    vp, ap, sp, okp = py.tql_eigenvalues(d, e, 1e-13, 50)
    assert okc and okp
    np.testing.assert_allclose(np.sort(vc), np.sort(vp), rtol=0, atol=1e-13 * max(1.0, np.max(np.abs(d))))


@pytest.mark.parametrize("k", range(8))
def test_sturm_and_bisect_parity(k):
    d, e = list(sections())[k]
    for x in np.linspace(np.min(d) - 1, np.max(d) + 1, 17):
        assert cy.sturm_count(d, e, x, 1e-14) == py.sturm_count(d, e, x, 1e-14)
    idx = np.arange(d.size, dtype=np.int64)
    lo, hi = np.min(d) - 2 * np.max(np.abs(e), initial=0) - 1, np.max(d) + 2 * np.max(np.abs(e), initial=0) + 1
    bc = cy.bisect_eigenvalues(d, e, idx, lo, hi, 1e-12, 1e-14)
    bp = py.bisect_eigenvalues(d, e, idx, lo, hi, 1e-12, 1e-14)
    np.testing.assert_array_equal(bc, bp)
    assert cy.inf_norm(d, e) == py.inf_norm(d, e)


def test_pure_python_switch():
    env = dict(os.environ, SPECOP_PURE_PYTHON="1")
    code = (
        "import json, specop;"
        "from specop import BergmanType, make_weight, jacobi_truncation, eigenvalues;"
        "t = jacobi_truncation(make_weight(BergmanType(-1.0)), 0.5, 200);"
        "print(json.dumps([specop.BACKEND, list(eigenvalues(t).values[:4])]))"
    )
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, values = json.loads(proc.stdout)
    assert backend == "python"
    t = jacobi_truncation(make_weight(BergmanType(-1.0)), 0.5, 200)
    np.testing.assert_allclose(values, eigensolve.eigenvalues(t).values[:4], atol=1e-13)
