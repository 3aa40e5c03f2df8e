"""Acceptance suite: one test per acceptance criterion, each printing a
PASS/FAIL line (run with ``pytest -s`` to see them stream)."""

import math
import time

import numpy as np
import pytest

from aqogap import annealing, models, numkit, oracle, reduction
from aqogap.annealing import (analytic_scaling, fit_exponent, gap_profile,
                              log2_t_ann_grover_override, q_epsilon, t_comp)
from aqogap.models import (GroverNoiseGrv, GroverNoiseStd, GroverPlain,
                           MLevelGrover, MultiSolution, Tunneling)


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_oracle_exactness():
    t0 = time.time()
    import os
    report = oracle.run_verification(n_values=range(3, 11), draws=20,
                                     s_values=np.round(np.linspace(0, 1, 11), 10),
                                     seed=0, tol=1e-9,
                                     workers=min(4, os.cpu_count() or 1))
    elapsed = time.time() - t0
    detail = (f"all models x n in 3..10 x 20 draws x 11 s-points: "
              f"{report.cases} cases, worst deviation {report.worst():.2e}, "
              f"{elapsed:.0f}s")
    _report(1, report.passed and elapsed <= 300.0, detail)


def test_criterion_2_grover_gap_law():
    t0 = time.time()
    worst = 0.0
    for n in range(4, 31):
        prof = gap_profile(GroverPlain(n=n, driver="grover", target_scale=1.0))
        worst = max(worst, abs(prof.g_min - 2.0 ** (-n / 2)) / 2.0 ** (-n / 2))
    elapsed = time.time() - t0
    _report(2, worst < 1e-8 and elapsed <= 60.0,
            f"g_min = 2^(-n/2) for n in 4..30, worst relative error {worst:.2e}, "
            f"{elapsed:.0f}s")


def test_criterion_3_scaling_exponents():
    t0 = time.time()
    results = []
    pts = [(n, t_comp(n, 0.5, lambda q, n=n: log2_t_ann_grover_override(n)).log2_t_comp)
           for n in range(40, 161, 8)]
    slope_half = fit_exponent(pts).slope
    ok = abs(slope_half - 0.5) <= 0.01
    results.append(f"eps=0.5 slope {slope_half:.4f} (|d|={abs(slope_half-0.5):.4f})")
    for eps in (1.5, 2.0, 3.0):
        pts = [(n, t_comp(n, eps, lambda q, n=n: log2_t_ann_grover_override(n)).log2_t_comp)
               for n in range(80, 161, 8)]
        slope = fit_exponent(pts).slope
        ref = analytic_scaling(eps)
        ok = ok and abs(slope - ref) <= 0.03
        results.append(f"eps={eps} slope {slope:.4f} vs analytic {ref:.4f}")
    elapsed = time.time() - t0
    _report(3, ok and elapsed <= 120.0, "; ".join(results) + f"; {elapsed:.0f}s")


def test_criterion_4_analytic_thresholds():
    lo, hi = 2.0, 8.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if analytic_scaling(mid) >= 1.0:
            hi = mid
        else:
            lo = mid
    root = 0.5 * (lo + hi)
    below = analytic_scaling(1.0 - 1e-9)
    above = analytic_scaling(1.0 + 1e-9)
    ok = (abs(root - 4.544) <= 0.01
          and abs(below - 0.5) <= 1e-12 and abs(above - 0.5) <= 1e-12)
    _report(4, ok, f"classical threshold at eps = {root:.4f}; "
                   f"continuity at 1: {below:.15f} / {above:.15f}")


def test_criterion_5_fig1_slopes():
    t0 = time.time()
    ns = list(range(20, 101, 16))
    lin_pts = []
    opt_pts = []
    for n in ns:
        spec = GroverPlain(n=n, driver="standard", target_scale=1.0)
        prof = gap_profile(spec)
        lin_pts.append((n, -2.0 * math.log2(prof.g_min)))
        opt_pts.append((n, math.log2(annealing.t_ann_optimal(spec, profile=prof))))
    lin_slope = fit_exponent(lin_pts).slope
    opt_slope = fit_exponent(opt_pts).slope
    elapsed = time.time() - t0
    ok = 0.9 <= lin_slope <= 1.1 and 0.45 <= opt_slope <= 0.55 and elapsed <= 300.0
    _report(5, ok, f"standard driver eps=0 over n in 20..100: linear slope "
                   f"{lin_slope:.4f} in [0.9,1.1], optimal slope {opt_slope:.4f} "
                   f"in [0.45,0.55]; {elapsed:.0f}s")


def test_criterion_6_multisolution_degeneracy():
    t0 = time.time()
    rng = np.random.default_rng(0)
    targets = tuple(int(t) for t in rng.choice(2**60, size=5, replace=False))
    spec = MultiSolution(n=60, targets=targets)
    decomp, weights = models.build(spec, 1.0)
    eff = reduction.assemble_effective(decomp, weights)
    dim = eff.matrix.shape[0]
    eigs = numkit.eigenvalues(eff.matrix)
    spread = float(eigs[4] - eigs[0])
    elapsed = time.time() - t0
    ok = dim <= 300 and spread <= 1e-9 and elapsed <= 60.0
    _report(6, ok, f"n=60 p=5: dimension {dim} <= 300, five lowest eigenvalues "
                   f"within {spread:.2e} at s=1; {elapsed:.0f}s")


def test_criterion_7_flat_gap_large_disorder():
    # Table-1 convention (unit target) at q=0, eps=10: the minimum gap is
    # the dressed-field band gap, independent of n
    t0 = time.time()
    g40 = gap_profile(GroverNoiseStd(n=40, epsilon=10.0, q=0, target_scale=1.0)).g_min
    g160 = gap_profile(GroverNoiseStd(n=160, epsilon=10.0, q=0, target_scale=1.0)).g_min
    rel = abs(g160 - g40) / g40
    elapsed = time.time() - t0
    _report(7, rel < 0.10, f"standard driver q=0 eps=10: g_min(40)={g40:.6f}, "
                           f"g_min(160)={g160:.6f}, relative spread {rel:.2e}; "
                           f"{elapsed:.0f}s")


def test_criterion_8_dimensionality_ledger():
    rng = np.random.default_rng(4)
    checks = []
    for n in (4, 6, 9):
        checks.append((models.reduced_dimension(GroverPlain(n, "grover")), "==", 2))
        checks.append((models.reduced_dimension(GroverPlain(n, "standard")), "==", n + 1))
        q = n // 2
        checks.append((models.reduced_dimension(GroverNoiseStd(n, 1.3, q)), "==", n + 1))
        checks.append((models.reduced_dimension(GroverNoiseGrv(n, 1.3, q)), "==", n + 2))
        checks.append((models.reduced_dimension(
            Tunneling(n, tuple(rng.uniform(0.3, 2.0, n)))), "<=", (n + 2) ** 2))
        p = 3
        targets = tuple(int(t) for t in rng.choice(2**n, size=p, replace=False))
        checks.append((models.reduced_dimension(MultiSolution(n, targets)), "<=", p * n))
        m = 4
        degens = (2**n - 3, 1, 1, 1)
        checks.append((models.reduced_dimension(
            MLevelGrover(n, tuple(float(e) for e in range(m)), degens)), "==", m))
    ok = all((a == b) if op == "==" else (a <= b) for a, op, b in checks)
    _report(8, ok, f"{len(checks)} dimension checks against the per-model bounds "
                   f"(n+1, n+2, 2, M, <= p n, <= (n+2)^2)")


def test_criterion_9_tcomp_point_value():
    res = t_comp(10, 0.5, lambda q: log2_t_ann_grover_override(10),
                 target_success=0.99)
    value = res.t_comp
    ok = abs(value - 521.7) <= 0.1 and res.q_star == 5
    _report(9, ok, f"Grover-driver override n=10 eps=0.5: T_comp = {value:.4f} "
                   f"(q* = {res.q_star})")
