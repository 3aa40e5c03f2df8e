"""Exact block reduction of highly degenerate plus low-rank Hamiltonians.

The total Hamiltonian is split as ``H = a(s) H_A + b(s) H_B`` where H_A has
M distinct eigenvalues E with degeneracies lambda(E), and H_B is a sum of k
rank-1 projectors chi_alpha |psi_alpha><psi_alpha|.  Writing Z_alpha(E) for
the norm of the projection of psi_alpha onto the E-eigenspace and working
in the orthonormalized span of those projections, the spectrum splits
exactly into one dense block of dimension sum_E kappa(E) plus the leftover
values a(s) E, each with multiplicity lambda(E) - kappa(E).

Models supply the per-level data (:class:`LevelDecomposition`) and the
projector weights; this module owns the orthogonalization, block assembly
and spectrum reconstruction.  All computations follow the dtype of the
supplied arrays, so longdouble input yields a longdouble block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import numkit

__all__ = [
    "Level",
    "LevelDecomposition",
    "ProjectorWeights",
    "EffectiveHamiltonian",
    "SpectrumReconstruction",
    "ModelConstructionError",
    "orthogonalize_level",
    "assemble_effective",
    "reconstruct_full_spectrum",
]

COMPLETENESS_TOL = 1e-10


class ModelConstructionError(ValueError):
    """A level decomposition violates its structural contracts."""


@dataclass(frozen=True, eq=False)
class Level:
    """One eigenvalue of H_A with the projector data living on it.

    ``z[alpha]`` is the projection norm of psi_alpha onto this eigenspace;
    ``gram[alpha, beta]`` the normalized overlap of the projections.  Gram
    entries for alpha with ``z[alpha] == 0`` are ignored.
    """

    energy: float
    degeneracy: int
    z: np.ndarray
    gram: np.ndarray


@dataclass(frozen=True, eq=False)
class LevelDecomposition:
    """Per-s snapshot of the H_A level structure.

    ``b_coeff`` is kept for completeness of the split; the builders in
    :mod:`aqogap.models` fold all s-dependence into the projector weights
    and set it to 1.
    """

    s: float
    a_coeff: float
    b_coeff: float
    n_qubits: int
    levels: tuple

    def validate(self, tol: float = COMPLETENESS_TOL) -> None:
        """Check the structural invariants; raise ModelConstructionError."""
        if not self.levels:
            raise ModelConstructionError("decomposition has no levels")
        k = len(self.levels[0].z)
        total = 0
        z_sq = None
        for lv in self.levels:
            if len(lv.z) != k or lv.gram.shape != (k, k):
                raise ModelConstructionError("inconsistent projector count across levels")
            if np.any(lv.z < 0):
                raise ModelConstructionError("negative projection norm")
            active = lv.z > 0
            gd = np.diag(lv.gram)
            if np.any(np.abs(gd[active] - 1) > 1e-8):
                raise ModelConstructionError("gram diagonal != 1 on active projectors")
            if np.any(np.abs(lv.gram[np.ix_(active, active)]) > 1 + 1e-8):
                raise ModelConstructionError("gram entry above 1 in magnitude")
            total += lv.degeneracy
            z_sq = lv.z.astype(np.float64) ** 2 if z_sq is None else z_sq + lv.z.astype(np.float64) ** 2
        if total != 2**self.n_qubits:
            raise ModelConstructionError(
                f"degeneracies sum to {total}, expected 2^{self.n_qubits}"
            )
        if np.any(np.abs(z_sq - 1) > tol):
            worst = float(np.max(np.abs(z_sq - 1)))
            raise ModelConstructionError(f"projection norms not complete: |sum Z^2 - 1| = {worst:g}")


@dataclass(frozen=True)
class ProjectorWeights:
    """The rank-1 content of H_B: k projectors with weights chi_alpha(s).

    ``chi`` maps s to the length-k weight vector; s-dependent weights are
    allowed (the Grover-driver noise model folds both s and 1-s factors
    into them).
    """

    count: int
    chi: Callable[[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """The dense block: matrix, (energy, mu) basis labels, kappa per level."""

    matrix: np.ndarray
    basis: tuple
    kappas: tuple


@dataclass(frozen=True, eq=False)
class SpectrumReconstruction:
    """Reduced eigenvalues plus the factored-out (value, multiplicity) lines."""

    reduced_eigs: np.ndarray
    factored_levels: tuple

    def total_multiplicity(self) -> int:
        return len(self.reduced_eigs) + sum(m for _, m in self.factored_levels)

    def as_sorted_array(self) -> np.ndarray:
        """Full spectrum as a sorted multiset (small systems only)."""
        parts = [np.asarray(self.reduced_eigs, dtype=np.float64)]
        for value, mult in self.factored_levels:
            parts.append(np.full(mult, value, dtype=np.float64))
        return np.sort(np.concatenate(parts))

    def lowest(self, count: int) -> np.ndarray:
        """The lowest ``count`` spectrum values, counting multiplicity.

        Safe for astronomically large factored multiplicities: each
        factored line contributes at most ``count`` copies.
        """
        vals = list(np.asarray(self.reduced_eigs)[: count])
        for value, mult in self.factored_levels:
            vals.extend([value] * min(mult, count))
        vals.sort()
        return np.asarray(vals[:count])


def orthogonalize_level(gram, z, tol: float = numkit.DEFAULT_CHOL_TOL):
    """Orthonormal-basis expansion coefficients for one level.

    Restricts the Gram matrix to the active projectors (z > 0), factors it
    with rank-detecting pivoted Cholesky, and returns ``(t, kappa)`` where
    ``t`` is kappa x k in the original projector order with zero columns on
    inactive projectors: ``t[mu, alpha] = <basis_mu | projection_alpha>``.
    """
    z = np.asarray(z)
    gram = np.asarray(gram)
    k = len(z)
    active = np.flatnonzero(z > 0)
    dtype = np.result_type(gram.dtype, z.dtype)
    if len(active) == 0:
        return np.zeros((0, k), dtype=dtype), 0
    sub = gram[np.ix_(active, active)]
    try:
        cf = numkit.pivoted_psd_cholesky(sub, tol=tol)
    except numkit.NotPositiveSemidefinite as exc:
        raise ModelConstructionError(f"level gram not PSD: {exc}") from exc
    t = np.zeros((cf.rank, k), dtype=dtype)
    t[:, active[cf.pivots]] = cf.factor
    return t, cf.rank


def assemble_effective(decomp: LevelDecomposition, weights: ProjectorWeights,
                       tol: float = numkit.DEFAULT_CHOL_TOL) -> EffectiveHamiltonian:
    """Build the dense effective block from a level decomposition.

    The block is ``diag(a E) + b * U diag(chi) U^T`` where row (E, mu) of U
    holds ``<basis_mu | psi_alpha> = T_mu_alpha Z_alpha(E)``.  Symmetric by
    construction.
    """
    decomp.validate()
    chi = np.asarray(weights.chi(decomp.s))
    k = len(decomp.levels[0].z)
    if weights.count != k or len(chi) != k:
        raise ValueError(f"projector count mismatch: chi has {len(chi)}, levels have {k}")
    if not np.all(np.isfinite(chi)):
        raise ValueError("chi(s) has non-finite entries")

    rows = []
    diag = []
    basis = []
    kappas = []
    a = decomp.a_coeff
    for lv in decomp.levels:
        t, kappa = orthogonalize_level(lv.gram, lv.z, tol=tol)
        if kappa > min(k, lv.degeneracy):
            raise ModelConstructionError(
                f"kappa={kappa} exceeds min(k, lambda) at level {lv.energy}"
            )
        kappas.append(kappa)
        if kappa == 0:
            continue
        rows.append(t * lv.z[None, :])
        diag.extend([a * lv.energy] * kappa)
        basis.extend((lv.energy, mu) for mu in range(kappa))
    if not rows:
        raise ModelConstructionError("all levels lie in the kernel of H_B")
    u = np.vstack(rows)
    matrix = (u * (decomp.b_coeff * chi)) @ u.T
    matrix[np.diag_indices_from(matrix)] += np.asarray(diag, dtype=matrix.dtype)
    matrix = (matrix + matrix.T) / 2
    return EffectiveHamiltonian(matrix=matrix, basis=tuple(basis), kappas=tuple(kappas))


def reconstruct_full_spectrum(decomp: LevelDecomposition,
                              eff: EffectiveHamiltonian) -> SpectrumReconstruction:
    """Reduced eigenvalues plus the factored a(s) E lines.

    Total multiplicity is checked against 2^n; a mismatch signals a
    kappa/lambda accounting bug upstream.
    """
    reduced = numkit.eigenvalues(np.asarray(eff.matrix, dtype=np.float64))
    factored = []
    a = decomp.a_coeff
    for lv, kappa in zip(decomp.levels, eff.kappas):
        rest = lv.degeneracy - kappa
        if rest > 0:
            factored.append((a * lv.energy, rest))
    recon = SpectrumReconstruction(reduced_eigs=reduced, factored_levels=tuple(factored))
    if recon.total_multiplicity() != 2**decomp.n_qubits:
        raise ModelConstructionError(
            f"reconstructed multiplicity {recon.total_multiplicity()} != 2^{decomp.n_qubits}"
        )
    return recon
