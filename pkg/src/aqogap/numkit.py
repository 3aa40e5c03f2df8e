"""Dense symmetric linear algebra and log-domain combinatorial numerics.

Everything downstream (the reduction engine, the model zoo, the timing
layer) builds on the four primitives here:

* :func:`eigh` -- symmetric eigensolver (Householder tridiagonalization
  followed by implicit-shift QL), backed by the selected kernel backend.
* :func:`pivoted_psd_cholesky` -- diagonally pivoted Cholesky with rank
  detection for positive-semidefinite Gram matrices.
* :class:`SignedLogReal` / :func:`signed_logsumexp` -- sign + log-magnitude
  scalars for overflow-safe alternating binomial sums up to n = 160.
* :func:`log_binomial` -- exact log binomial coefficients via cumulative
  log sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "NotPositiveSemidefinite",
    "SignedLogReal",
    "CholFactor",
    "ensure_symmetric",
    "eigh",
    "eigenvalues",
    "lowest_eigenvalues",
    "pivoted_psd_cholesky",
    "signed_logsumexp",
    "log_binomial",
    "log_binomial_row",
    "log_factorials",
]

#: Relative magnitude below which a signed log-domain sum is declared an
#: exact cancellation (sign 0).
CANCELLATION_CUTOFF = 1e-13

#: Default drop tolerance for the pivoted Cholesky, relative to the largest
#: initial diagonal entry.
DEFAULT_CHOL_TOL = 1e-12


class NotPositiveSemidefinite(ValueError):
    """Raised when a pivoted Cholesky meets a clearly negative remainder."""


# ---------------------------------------------------------------------------
# signed log-domain scalars


@dataclass(frozen=True)
class SignedLogReal:
    """A real number stored as sign and natural-log magnitude.

    ``sign == 0`` represents exactly zero regardless of ``logmag``.
    """

    sign: int
    logmag: float

    @classmethod
    def from_real(cls, x: float) -> "SignedLogReal":
        if x == 0:
            return cls(0, -math.inf)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def zero(cls) -> "SignedLogReal":
        return cls(0, -math.inf)

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.logmag)

    def times(self, other: "SignedLogReal") -> "SignedLogReal":
        if self.sign == 0 or other.sign == 0:
            return SignedLogReal.zero()
        return SignedLogReal(self.sign * other.sign, self.logmag + other.logmag)

    def scaled(self, log_factor: float) -> "SignedLogReal":
        if self.sign == 0:
            return self
        return SignedLogReal(self.sign, self.logmag + log_factor)

    def negated(self) -> "SignedLogReal":
        return SignedLogReal(-self.sign, self.logmag)


def _logsumexp_sorted(mags: list) -> float:
    """log(sum(exp(mags))) with ascending-order accumulation.

    Sorting makes the result independent of input permutation, which the
    signed-sum contract requires.
    """
    if not mags:
        return -math.inf
    mags = sorted(mags)
    top = mags[-1]
    if top == -math.inf:
        return -math.inf
    acc = 0.0
    for m in mags:
        acc += math.exp(m - top)
    return top + math.log(acc)


def signed_logsumexp(terms) -> SignedLogReal:
    """Exact-as-possible signed sum of SignedLogReal terms.

    The result is accurate to ~1e-13 relative to the largest-magnitude
    term; anything cancelling below that threshold is returned as an exact
    zero (sign 0).  Permutation invariant.
    """
    pos = [t.logmag for t in terms if t.sign > 0]
    neg = [t.logmag for t in terms if t.sign < 0]
    if not pos and not neg:
        return SignedLogReal.zero()
    max_term = max(pos + neg)
    lp = _logsumexp_sorted(pos)
    ln = _logsumexp_sorted(neg)
    if lp == ln:
        return SignedLogReal.zero()
    sign = 1 if lp > ln else -1
    hi, lo = (lp, ln) if lp > ln else (ln, lp)
    # hi + log(1 - exp(lo - hi)), guarded for lo == -inf
    if lo == -math.inf:
        mag = hi
    else:
        mag = hi + math.log1p(-math.exp(lo - hi))
    if mag < max_term + math.log(CANCELLATION_CUTOFF):
        return SignedLogReal.zero()
    return SignedLogReal(sign, mag)


def log_factorials(n: int, dtype=np.float64) -> np.ndarray:
    """log(k!) for k = 0..n, by cumulative log sums."""
    out = np.zeros(n + 1, dtype=dtype)
    if n >= 1:
        out[1:] = np.cumsum(np.log(np.arange(1, n + 1, dtype=dtype)))
    return out


def log_binomial(n: int, k: int) -> float:
    """Natural log of C(n, k).  Raises for k outside [0, n]."""
    if not (0 <= k <= n):
        raise ValueError(f"k={k} outside [0, {n}]")
    k = min(k, n - k)
    # sum_i log((n - k + i) / i), accumulated smallest factors first
    acc = 0.0
    for i in range(1, k + 1):
        acc += math.log(n - k + i) - math.log(i)
    return acc


def log_binomial_row(n: int, dtype=np.float64) -> np.ndarray:
    """log C(n, k) for k = 0..n."""
    lf = log_factorials(n, dtype=dtype)
    k = np.arange(n + 1)
    return lf[n] - lf[k] - lf[n - k]


# ---------------------------------------------------------------------------
# symmetric matrices


def ensure_symmetric(a, name: str = "matrix", tol: float = 1e-12) -> np.ndarray:
    """Validate and exactly symmetrize a square matrix.

    Rejects non-finite entries and asymmetry beyond ``tol * max|a|``.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    if a.size:
        scale = np.max(np.abs(a))
        asym = np.max(np.abs(a - a.T))
        if asym > tol * max(scale, 1.0):
            raise ValueError(f"{name} is not symmetric (max asymmetry {asym:g})")
    return (a + a.T) / 2


def eigh(m):
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a
    symmetric matrix.

    Dense Householder tridiagonalization + implicit-shift QL; residuals
    ``m v = w v`` hold to 1e-12 * ||m|| per pair.
    """
    a = ensure_symmetric(m)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=a.dtype), np.zeros((0, 0), dtype=a.dtype)
    d, e, q = _kernels.tridiagonalize(a, vectors=True)
    return _kernels.tridiag_eigh(d, e, q)


def eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues only (skips eigenvector accumulation)."""
    a = ensure_symmetric(m)
    if a.shape[0] == 0:
        return np.zeros(0, dtype=a.dtype)
    d, e = _kernels.tridiagonalize(a)
    return _kernels.tridiag_eigenvalues(d, e)


def lowest_eigenvalues(m, k: int) -> np.ndarray:
    """The k lowest eigenvalues, by Sturm-sequence bisection.

    Converges to the resolution of the input dtype, so longdouble input
    resolves eigenvalue differences far below float64 noise.
    """
    a = ensure_symmetric(m)
    k = min(k, a.shape[0])
    if k <= 0:
        return np.zeros(0, dtype=a.dtype)
    d, e = _kernels.tridiagonalize(a)
    return _kernels.sturm_lowest(d, e, k)


@dataclass(frozen=True)
class CholFactor:
    """Pivoted Cholesky factor of a PSD matrix.

    ``factor`` is rank x dim with columns in pivot order:
    ``factor.T @ factor`` reproduces ``g[pivots][:, pivots]`` up to the
    dropped rank.
    """

    factor: np.ndarray
    rank: int
    pivots: np.ndarray
    tolerance: float


def pivoted_psd_cholesky(g, tol: float = DEFAULT_CHOL_TOL) -> CholFactor:
    """Pivoted Cholesky with rank detection for PSD matrices.

    Pivoting is on the largest remaining diagonal.  The rank is the number
    of pivots whose diagonal remainder exceeds ``tol * max initial
    diagonal``; a remainder below ``-10 * tol * max initial diagonal``
    raises :class:`NotPositiveSemidefinite`.
    """
    a = ensure_symmetric(g, name="gram")
    scale = float(np.max(np.diag(a))) if a.size else 0.0
    tol_abs = tol * scale if scale > 0 else tol
    r, piv, rank, min_rem = _kernels.pivoted_cholesky(a, tol_abs)
    if min_rem < -10.0 * tol_abs:
        raise NotPositiveSemidefinite(
            f"pivot remainder {float(min_rem):g} below -10*tol ({-10 * tol_abs:g})"
        )
    return CholFactor(factor=r, rank=int(rank), pivots=np.asarray(piv), tolerance=tol)
