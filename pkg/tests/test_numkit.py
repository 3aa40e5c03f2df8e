import math

import numpy as np
import pytest

from aqogap import numkit
from aqogap.numkit import SignedLogReal, signed_logsumexp


# ---------------------------------------------------------------------------
# eigh


def test_eigh_diagonal():
    w, v = numkit.eigh(np.diag([1.0, 2.0]))
    assert np.allclose(w, [1.0, 2.0])
    assert np.allclose(np.abs(v), np.eye(2))


def test_eigh_symmetry_forced():
    w, _ = numkit.eigh(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0])


def _charpoly_coeffs(a):
    """Characteristic polynomial by the Faddeev-LeVerrier recursion
    (independent of any eigensolver)."""
    n = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def test_eigh_against_charpoly_roots():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(5, 5))
    a = (a + a.T) / 2
    w, _ = numkit.eigh(a)
    roots = np.sort(np.roots(_charpoly_coeffs(a)).real)
    assert np.max(np.abs(w - roots)) < 1e-10


def test_eigh_contracts():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3, 8, 33):
        a = rng.normal(size=(n, n))
        a = (a + a.T) / 2
        w, v = numkit.eigh(a)
        norm = np.max(np.abs(a))
        assert np.all(np.diff(w) >= 0)
        assert np.max(np.abs(a @ v - v * w)) < 1e-12 * max(norm, 1.0)
        assert np.max(np.abs(v.T @ v - np.eye(n))) < 1e-12


def test_eigh_rejects_nonfinite():
    with pytest.raises(ValueError):
        numkit.eigh(np.array([[np.nan, 0.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        numkit.eigh(np.array([[0.0, 1.0], [2.0, 0.0]]))


def test_eigenvalues_matches_eigh():
    rng = np.random.default_rng(6)
    a = rng.normal(size=(12, 12))
    a = (a + a.T) / 2
    w, _ = numkit.eigh(a)
    assert np.allclose(numkit.eigenvalues(a), w, atol=1e-12)


def test_lowest_eigenvalues_sturm():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(20, 20))
    a = (a + a.T) / 2
    lo = numkit.lowest_eigenvalues(a, 3)
    assert np.allclose(lo, np.linalg.eigvalsh(a)[:3], atol=1e-12)


# ---------------------------------------------------------------------------
# pivoted Cholesky


def test_cholesky_identity():
    cf = numkit.pivoted_psd_cholesky(np.eye(3))
    assert cf.rank == 3
    assert np.allclose(cf.factor, np.eye(3))


def test_cholesky_all_ones_rank1():
    cf = numkit.pivoted_psd_cholesky(np.ones((3, 3)))
    assert cf.rank == 1
    assert np.allclose(cf.factor, [[1.0, 1.0, 1.0]])


def test_cholesky_construct_and_check():
    rng = np.random.default_rng(21)
    a = rng.normal(size=(4, 6))
    g = a.T @ a
    cf = numkit.pivoted_psd_cholesky(g)
    assert cf.rank == 4
    gp = g[np.ix_(cf.pivots, cf.pivots)]
    assert np.max(np.abs(cf.factor.T @ cf.factor - gp)) < 1e-12


def test_cholesky_random_psd_property():
    rng = np.random.default_rng(42)
    for _ in range(120):
        m = int(rng.integers(1, 9))
        r = int(rng.integers(1, m + 1))
        b = rng.normal(size=(r, m))
        g = b.T @ b
        tol = 1e-12
        cf = numkit.pivoted_psd_cholesky(g, tol=tol)
        assert cf.rank <= min(r, m)
        gp = g[np.ix_(cf.pivots, cf.pivots)]
        err = np.max(np.abs(cf.factor.T @ cf.factor - gp))
        assert err <= 10 * tol * max(np.max(np.diag(g)), 1.0)


def test_cholesky_rejects_indefinite():
    g = np.array([[1.0, 0.0], [0.0, -0.5]])
    with pytest.raises(numkit.NotPositiveSemidefinite):
        numkit.pivoted_psd_cholesky(g)


# ---------------------------------------------------------------------------
# signed log-domain sums


def test_signed_sum_two_minus_one():
    out = signed_logsumexp([SignedLogReal(1, math.log(2.0)), SignedLogReal(-1, 0.0)])
    assert out.sign == 1
    assert abs(out.logmag) < 1e-14


def test_signed_sum_exact_cancellation():
    x = 3.7
    out = signed_logsumexp([SignedLogReal(1, x), SignedLogReal(-1, x)])
    assert out.sign == 0
    assert out.to_real() == 0.0


def test_signed_sum_overlap_terms_cancel():
    # the alternating binomial sum at n=4, u=1, d=2: +C(2,0)C(2,1) - C(2,1)C(2,0)
    terms = [SignedLogReal(1, math.log(2.0)), SignedLogReal(-1, math.log(2.0))]
    assert signed_logsumexp(terms).sign == 0


def test_signed_sum_permutation_invariant():
    rng = np.random.default_rng(17)
    for _ in range(50):
        k = int(rng.integers(1, 12))
        terms = [SignedLogReal(int(rng.choice([-1, 1])), float(rng.uniform(-5, 5)))
                 for _ in range(k)]
        ref = signed_logsumexp(terms)
        shuffled = [terms[i] for i in rng.permutation(k)]
        out = signed_logsumexp(shuffled)
        assert out.sign == ref.sign
        if ref.sign != 0:
            assert out.logmag == ref.logmag  # sorted accumulation is exact


def test_signed_sum_matches_float_sum():
    rng = np.random.default_rng(18)
    for _ in range(200):
        vals = rng.uniform(-10, 10, size=int(rng.integers(1, 9)))
        ref = float(np.sum(vals))
        out = signed_logsumexp([SignedLogReal.from_real(v) for v in vals])
        if abs(ref) < 1e-13 * np.max(np.abs(vals)):
            continue  # genuine near-cancellation, contract allows sign 0
        assert abs(out.to_real() - ref) < 1e-12 * max(abs(ref), 1.0)


def test_signed_log_real_roundtrip():
    # exp(log(x)) loses ~eps * |log x| relative accuracy at extreme magnitudes
    for x in (0.0, 1.0, -2.5, 1e-300, -1e300):
        assert SignedLogReal.from_real(x).to_real() == pytest.approx(x, rel=1e-13)


# ---------------------------------------------------------------------------
# log binomials


def test_log_binomial_values():
    assert numkit.log_binomial(4, 2) == pytest.approx(math.log(6.0), abs=1e-12)
    assert numkit.log_binomial(7, 0) == 0.0
    expect = math.lgamma(161) - 2 * math.lgamma(81)
    assert numkit.log_binomial(160, 80) == pytest.approx(expect, rel=1e-10)


def test_log_binomial_rejects_out_of_range():
    with pytest.raises(ValueError):
        numkit.log_binomial(4, 5)
    with pytest.raises(ValueError):
        numkit.log_binomial(4, -1)


def test_log_binomial_vs_integer_arithmetic():
    for n in range(0, 61):
        for k in range(0, n + 1):
            exact = math.log(math.comb(n, k))
            assert abs(numkit.log_binomial(n, k) - exact) <= 1e-12 * max(exact, 1.0)


def test_log_binomial_row_consistent():
    row = numkit.log_binomial_row(30)
    for k in range(31):
        assert row[k] == pytest.approx(numkit.log_binomial(30, k), abs=1e-11)
