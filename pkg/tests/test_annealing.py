import math

import numpy as np
import pytest

from aqogap import annealing, models, oracle
from aqogap.annealing import (GapProfile, analytic_scaling, fit_exponent,
                              gap_at, gap_profile, log2_t_ann_grover_override,
                              q_distribution, q_epsilon, t_ann_linear,
                              t_ann_optimal, t_comp)
from aqogap.models import GroverNoiseStd, GroverPlain, MultiSolution


# ---------------------------------------------------------------------------
# gap profiles


def test_gap_profile_two_qubit_grover():
    prof = gap_profile(GroverPlain(n=2, driver="grover", target_scale=1.0))
    full = np.linalg.eigvalsh(
        oracle.full_hamiltonian(GroverPlain(2, "grover", 1.0), 0.5).matrix)
    assert prof.g_min == pytest.approx(full[1] - full[0], rel=1e-9)
    assert prof.s_star == pytest.approx(0.5, abs=1e-7)


@pytest.mark.parametrize("n", [4, 13, 22, 30])
def test_gap_profile_grover_law(n):
    prof = gap_profile(GroverPlain(n=n, driver="grover", target_scale=1.0))
    assert prof.g_min == pytest.approx(2.0 ** (-n / 2), rel=1e-8)


def test_gap_at_s0_standard_driver():
    assert gap_at(GroverPlain(n=5, driver="standard"), 0.0) == pytest.approx(2.0)


def test_gap_profile_refinement_not_worse_than_scan():
    spec = GroverNoiseStd(n=8, epsilon=1.5, q=3)
    prof = gap_profile(spec)
    assert prof.g_min <= np.min(prof.gaps) + 1e-15


def test_gap_profile_rejects_tiny_grid():
    with pytest.raises(ValueError):
        gap_profile(GroverPlain(n=3, driver="grover"), coarse_points=8)


# ---------------------------------------------------------------------------
# annealing times


def test_t_ann_linear_values():
    prof = GapProfile(s_points=np.array([0.5]), gaps=np.array([0.5]),
                      s_star=0.5, g_min=0.5)
    assert t_ann_linear(prof) == pytest.approx(4.0)
    zero = GapProfile(s_points=np.array([0.5]), gaps=np.array([0.0]),
                      s_star=0.5, g_min=0.0, degenerate_ground=True)
    assert t_ann_linear(zero) == math.inf


def test_t_ann_linear_grover_algebra():
    for n in (6, 12):
        prof = gap_profile(GroverPlain(n=n, driver="grover", target_scale=1.0))
        assert t_ann_linear(prof) == pytest.approx(2.0**n, rel=1e-6)


def test_t_ann_optimal_constant_gap(monkeypatch):
    c = 0.37

    def fake_profile(spec, coarse_points=257):
        return GapProfile(s_points=np.linspace(0, 1, 17),
                          gaps=np.full(17, c), s_star=0.44, g_min=c,
                          spectral_scale=1.0)

    monkeypatch.setattr(annealing, "gap_profile", fake_profile)
    monkeypatch.setattr(annealing, "gap_at", lambda spec, s, dtype=None: c)
    t = t_ann_optimal(object())
    assert t == pytest.approx(1.0 / c**2, rel=1e-6)


def _grover2_gap_sq(s):
    beta_sq = 0.25
    diag = (2 * s - 1) - 2 * s * beta_sq
    return diag * diag + 4 * s * s * beta_sq * (1 - beta_sq)


def test_t_ann_optimal_vs_quadrature_oracle():
    # n=2 Grover driver: closed-form two-level gap; reference integral via
    # fine Simpson on the closed form
    spec = GroverPlain(n=2, driver="grover", target_scale=1.0)
    xs = np.linspace(0.0, 1.0, 200001)
    ys = 1.0 / _grover2_gap_sq(xs)
    ref = float(np.trapezoid(ys, xs))
    t = t_ann_optimal(spec)
    assert t == pytest.approx(ref, rel=1e-5)
    prof = gap_profile(spec)
    assert t > 0.5 / prof.g_min**2 * prof.g_min  # finite and sane


def test_t_ann_optimal_divergence_error():
    with pytest.raises(ValueError, match="diverg"):
        t_ann_optimal(MultiSolution(n=5, targets=(3, 9)))


# ---------------------------------------------------------------------------
# repetition model


def test_q_distribution_values():
    assert q_distribution(4)[2] == pytest.approx(0.375, abs=1e-12)
    for n in (1, 7, 100):
        assert q_distribution(n).sum() == pytest.approx(1.0, abs=1e-12)
    assert q_distribution(100)[50] == pytest.approx(0.0795892, abs=1e-6)
    assert q_distribution(100)[50] < 0.08


def test_q_epsilon_values():
    assert q_epsilon(10, 2.0) == 2
    assert q_epsilon(12, 0.4) == 12
    assert q_epsilon(12, 0.5) == 12
    assert q_epsilon(160, 4.54) == 17
    assert q_epsilon(10, 0.0) == 10


def test_t_comp_grover_override_point():
    res = t_comp(10, 0.5, lambda q: log2_t_ann_grover_override(10))
    assert res.q_star == 5
    assert res.t_comp == pytest.approx(521.671, abs=0.05)


def test_t_comp_single_run_clamp():
    # when one run already exceeds the target success, K clamps to 1 and
    # T_comp equals the annealing time
    res = t_comp(4, 0.5, lambda q: 3.0, target_success=0.05)
    assert res.log2_t_comp == pytest.approx(3.0)


def test_t_comp_epsilon_zero_deterministic():
    res = t_comp(12, 0.0, lambda q: 7.5, schedule="linear")
    assert res.log2_t_comp == pytest.approx(7.5)
    assert res.q_epsilon == 12


def test_t_comp_matches_entropy_shape():
    # log2 T_comp at (n=40, eps=3) follows the entropy form
    # log2|ln 0.01| + 3n/2 - log2 C(n, q_eps) with the binomial expanded to
    # second Stirling order, n h(x) - (1/2) log2(2 pi n x (1-x))
    n, eps = 40, 3.0
    res = t_comp(n, eps, lambda q: log2_t_ann_grover_override(n))
    x = q_epsilon(n, eps) / n
    log2_binom = (n * annealing.shannon_entropy(x)
                  - 0.5 * math.log2(2 * math.pi * n * x * (1 - x)))
    analytic = math.log2(-math.log(0.01)) + 1.5 * n - log2_binom
    assert abs(res.log2_t_comp - analytic) < 0.5


def test_t_comp_minimality_and_monotonicity():
    n, eps = 12, 1.3
    log2_t = lambda q: log2_t_ann_grover_override(n)
    res = t_comp(n, eps, log2_t)
    p = q_distribution(n)
    for q in range(q_epsilon(n, eps) + 1):
        k_runs = max(1.0, math.log(0.01) / math.log1p(-p[q]))
        assert res.log2_t_comp <= log2_t(q) + math.log2(k_runs) + 1e-12
    relaxed = t_comp(n, eps, log2_t, target_success=0.9)
    assert relaxed.log2_t_comp <= res.log2_t_comp + 1e-12


# ---------------------------------------------------------------------------
# analytic scaling law


def test_analytic_scaling_values():
    assert analytic_scaling(0.5) == 0.5
    assert analytic_scaling(2.0) == pytest.approx(0.6887218755408672, abs=1e-12)


def test_analytic_scaling_continuity_at_threshold():
    assert analytic_scaling(1.0 - 1e-12) == pytest.approx(0.5, abs=1e-12)
    assert analytic_scaling(1.0 + 1e-12) == pytest.approx(0.5, abs=1e-12)
    assert analytic_scaling(1.0) == pytest.approx(0.5, abs=1e-15)


def test_analytic_scaling_classical_root():
    lo, hi = 2.0, 8.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if analytic_scaling(mid) >= 1.0:
            hi = mid
        else:
            lo = mid
    assert 0.5 * (lo + hi) == pytest.approx(4.544, abs=0.01)


def test_analytic_scaling_rejects_nonpositive():
    with pytest.raises(ValueError):
        analytic_scaling(0.0)


def test_standard_driver_more_robust_at_large_disorder():
    # at strong disorder the transverse-field driver scales better than
    # the Grover-style driver (whose annealing time is sqrt(2^n) per run)
    eps = 3.0
    ns = (12, 16, 20, 24, 28)
    std_pts = []
    for n in ns:
        cache = {}

        def log2_t(q, n=n, cache=cache):
            if q not in cache:
                spec = GroverNoiseStd(n=n, epsilon=eps, q=q)
                prof = gap_profile(spec, coarse_points=129)
                try:
                    cache[q] = math.log2(t_ann_optimal(spec, profile=prof))
                except ValueError:
                    # q = n/(2 eps) exactly: degenerate at s=1, unusable run
                    cache[q] = math.inf
            return cache[q]

        std_pts.append((n, t_comp(n, eps, log2_t).log2_t_comp))
    grv_pts = [(n, t_comp(n, eps, lambda q, n=n: log2_t_ann_grover_override(n)).log2_t_comp)
               for n in ns]
    std_slope = fit_exponent(std_pts).slope
    grv_slope = fit_exponent(grv_pts).slope
    assert std_slope < grv_slope - 0.05


# ---------------------------------------------------------------------------
# exponent fits


def test_fit_exponent_exact_line():
    pts = [(n, 0.5 * n + 3.0) for n in range(10, 60, 10)]
    fit = fit_exponent(pts)
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(3.0, abs=1e-10)
    assert fit.max_residual < 1e-12


def test_fit_exponent_requires_five_distinct():
    with pytest.raises(ValueError):
        fit_exponent([(10, 1.0), (20, 2.0), (30, 3.0), (40, 4.0)])
    with pytest.raises(ValueError):
        fit_exponent([(10, 1.0)] * 6)
