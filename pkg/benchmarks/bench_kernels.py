#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the symmetric eigensolver (values and full decomposition), the Sturm
lowest-pair extraction and the pivoted Cholesky on representative sizes,
then an end-to-end gap profile through each backend (fallback selected via
AQOGAP_BACKEND=py in a subprocess).

Run:  python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from aqogap import _kernels  # noqa: E402
from aqogap._kernels import pykern  # noqa: E402


def _time(fn, min_repeat=3, budget=0.5):
    t0 = time.perf_counter()
    fn()
    once = time.perf_counter() - t0
    reps = max(min_repeat, int(budget / max(once, 1e-9)))
    reps = min(reps, 2000)
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps


def bench_kernels():
    rng = np.random.default_rng(0)
    have_c = _kernels.backend_name() == "c"
    if not have_c:
        print("compiled backend not built; timing the fallback only")
    print(f"{'kernel':34s} {'dim':>5s} {'compiled':>12s} {'fallback':>12s} {'ratio':>7s}")
    for dim in (40, 161, 302):
        a = rng.normal(size=(dim, dim))
        a = (a + a.T) / 2
        d0, e0 = pykern.tridiagonalize(a)

        cases = [
            ("eigenvalues (tridiag + QL)",
             (lambda: _kernels._ckern.tridiag_eigenvalues(
                 *_kernels._ckern.tridiagonalize(a))) if have_c else None,
             lambda: pykern.tridiag_eigenvalues(*pykern.tridiagonalize(a))),
            ("eigh (with vectors)",
             (lambda: _kernels._ckern.tridiag_eigh(
                 *_kernels._ckern.tridiagonalize(a, True))) if have_c else None,
             lambda: pykern.tridiag_eigh(*pykern.tridiagonalize(a, vectors=True))),
            ("lowest pair (Sturm bisection)",
             (lambda: _kernels._ckern.sturm_lowest(d0, e0, 2)) if have_c else None,
             lambda: pykern.sturm_lowest(d0, e0, 2)),
        ]
        b = rng.normal(size=(dim, dim))
        g = b.T @ b
        tol = 1e-12 * float(np.max(np.diag(g)))
        cases.append((
            "pivoted Cholesky",
            (lambda: _kernels._ckern.pivoted_cholesky(g, tol)) if have_c else None,
            lambda: pykern.pivoted_cholesky(g, tol)))

        for name, f_c, f_py in cases:
            t_py = _time(f_py)
            if f_c is not None:
                t_c = _time(f_c)
                print(f"{name:34s} {dim:5d} {t_c*1e3:9.3f} ms {t_py*1e3:9.3f} ms "
                      f"{t_py/t_c:6.1f}x")
            else:
                print(f"{name:34s} {dim:5d} {'-':>12s} {t_py*1e3:9.3f} ms")


def bench_end_to_end():
    code = (
        "import time, aqogap\n"
        "from aqogap.models import GroverNoiseStd\n"
        "from aqogap.annealing import gap_profile\n"
        "spec = GroverNoiseStd(n=80, epsilon=1.5, q=20)\n"
        "t0 = time.perf_counter()\n"
        "prof = gap_profile(spec)\n"
        "print(f'{aqogap.backend_name()} backend: gap profile n=80 in "
        "{time.perf_counter()-t0:.2f}s (g_min={prof.g_min:.3e})')\n"
    )
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(os.path.dirname(__file__), "..", "src")
    print()
    for backend in ("c", "py"):
        env["AQOGAP_BACKEND"] = backend
        try:
            out = subprocess.run([sys.executable, "-c", code], env=env,
                                 capture_output=True, text=True, check=True)
            print(out.stdout.strip())
        except subprocess.CalledProcessError as exc:
            print(f"{backend} backend unavailable: {exc.stderr.strip().splitlines()[-1]}")


if __name__ == "__main__":
    bench_kernels()
    bench_end_to_end()
