"""Kernel backend selection.

The hot numerical kernels (Householder tridiagonalization, implicit-shift
QL, Sturm bisection, pivoted Cholesky) exist twice: a Cython extension
(``_ckern``, float64 only) and a numpy fallback (``pykern``, any float
dtype).  The compiled backend is used for float64 inputs when available;
everything else routes to the fallback.

Set ``AQOGAP_BACKEND=py`` to force the fallback, ``AQOGAP_BACKEND=c`` to
require the extension (ImportError if it was not built).
"""

from __future__ import annotations

import importlib
import os

import numpy as np

from . import pykern

_requested = os.environ.get("AQOGAP_BACKEND", "").strip().lower()
if _requested not in ("", "c", "py"):
    raise ValueError(f"AQOGAP_BACKEND must be 'c' or 'py', got {_requested!r}")

_ckern = None
if _requested != "py":
    try:
        _ckern = importlib.import_module("._ckern", __name__)
    except ImportError:
        if _requested == "c":
            raise


def backend_name() -> str:
    """Name of the backend used for float64 work: 'c' or 'py'."""
    return "c" if _ckern is not None else "py"


def _use_compiled(a) -> bool:
    return _ckern is not None and a.dtype == np.float64


def tridiagonalize(a, vectors=False):
    a = np.ascontiguousarray(a)
    if _use_compiled(a):
        return _ckern.tridiagonalize(a, vectors)
    return pykern.tridiagonalize(a, vectors)


def tridiag_eigenvalues(d, e):
    d = np.ascontiguousarray(d)
    e = np.ascontiguousarray(e)
    if _use_compiled(d):
        return _ckern.tridiag_eigenvalues(d, e)
    return pykern.tridiag_eigenvalues(d, e)


def tridiag_eigh(d, e, q):
    d = np.ascontiguousarray(d)
    e = np.ascontiguousarray(e)
    q = np.ascontiguousarray(q)
    if _use_compiled(d) and q.dtype == np.float64:
        return _ckern.tridiag_eigh(d, e, q)
    return pykern.tridiag_eigh(d, e, q)


def sturm_lowest(d, e, k):
    d = np.ascontiguousarray(d)
    e = np.ascontiguousarray(e)
    if _use_compiled(d):
        return _ckern.sturm_lowest(d, e, k)
    return pykern.sturm_lowest(d, e, k)


def pivoted_cholesky(g, tol_abs):
    g = np.ascontiguousarray(g)
    if _use_compiled(g):
        return _ckern.pivoted_cholesky(g, float(tol_abs))
    return pykern.pivoted_cholesky(g, tol_abs)
