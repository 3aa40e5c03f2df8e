"""Brute-force ground truth: dense 2^n Hamiltonians for n <= 10.

Builds the full annealing Hamiltonian for every model in the zoo, in the
unrotated frame with explicit disorder sign vectors and explicit target
states, and compares its spectrum (dense eigensolve) against the
reconstructed spectrum from the reduction engine.  Spin i of a basis index
x is bit i; sigma^z_i |x> = +|x> when bit i is 0.

The dense eigensolve deliberately uses numpy's LAPACK binding so the two
sides of every comparison share no linear algebra.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

try:
    from scipy.linalg import eigvalsh as _scipy_eigvalsh
except ImportError:
    _scipy_eigvalsh = None

from . import models, reduction
from .models import (GroverNoiseGrv, GroverNoiseStd, GroverPlain, MLevelGrover,
                     ModelSpec, MultiSolution, Tunneling)

__all__ = [
    "MAX_ORACLE_QUBITS",
    "DenseHamiltonian",
    "NoiseRealization",
    "full_hamiltonian",
    "compare_spectra",
    "SpectraComparison",
    "random_noise_realization",
    "draw_random_spec",
    "run_verification",
    "VerificationReport",
    "MODEL_KINDS",
]

MAX_ORACLE_QUBITS = 10

MODEL_KINDS = (
    "grover-plain-grv",
    "grover-plain-std",
    "grover-noise-std",
    "grover-noise-grv",
    "tunneling",
    "multi-solution",
    "m-level",
)


@dataclass(frozen=True, eq=False)
class DenseHamiltonian:
    n: int
    s: float
    matrix: np.ndarray


@dataclass(frozen=True)
class NoiseRealization:
    """Explicit target state and disorder signs for a noise model.

    ``signs[i]`` is the sign of epsilon_i.  The number of spins where the
    disorder raises the target energy, counting i with
    signs[i] * sigma^z_i(target) > 0, must equal the model's q.
    """

    target: int
    signs: tuple


def _sigma_z_diag(n: int, i: int) -> np.ndarray:
    idx = np.arange(2**n)
    return 1.0 - 2.0 * ((idx >> i) & 1)


@lru_cache(maxsize=4)
def _transverse_field_sum(n: int) -> np.ndarray:
    """Sum of sigma^x_i as a dense matrix (cached, treated as read-only)."""
    dim = 2**n
    h = np.zeros((dim, dim))
    idx = np.arange(dim)
    for i in range(n):
        h[idx, idx ^ (1 << i)] += 1.0
    h.setflags(write=False)
    return h


def _positive_contributions(n: int, target: int, signs) -> int:
    return sum(1 for i in range(n) if signs[i] * (1 - 2 * ((target >> i) & 1)) > 0)


def random_noise_realization(spec, rng) -> NoiseRealization:
    """Random (target, signs) pair consistent with the model's q."""
    n = spec.n
    target = int(rng.integers(0, 2**n))
    raised = rng.permutation(n)[: spec.q]
    signs = []
    for i in range(n):
        zdir = 1 - 2 * ((target >> i) & 1)
        signs.append(zdir if i in set(raised) else -zdir)
    out = NoiseRealization(target=target, signs=tuple(signs))
    assert _positive_contributions(n, target, signs) == spec.q
    return out


def hamiltonian_parts(spec: ModelSpec,
                      noise: Optional[NoiseRealization] = None,
                      target: Optional[int] = None):
    """(A, B) with H(s) = A + s B, built once per model realization.

    Every in-scope Hamiltonian is affine in s, so sweeping s needs only a
    scaled matrix add per point.  ``noise`` supplies the disorder
    realization for the noisy models (defaults to target 0 with the first
    q signs positive); ``target`` overrides the search target for the
    noiseless models.  Refuses n > 10.
    """
    n = spec.n
    if n > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle capped at n <= {MAX_ORACLE_QUBITS}, got {n}")
    dim = 2**n
    idx = np.arange(dim)

    if isinstance(spec, GroverPlain):
        t = 0 if target is None else int(target)
        if spec.driver == models.DRIVER_GROVER:
            a = np.full((dim, dim), -1.0 / dim)
        else:
            a = -_transverse_field_sum(n)
        b = -a.copy()
        b[t, t] += -spec.target_scale
        return a, b
    if isinstance(spec, (GroverNoiseStd, GroverNoiseGrv)):
        if noise is None:
            noise = NoiseRealization(target=0,
                                     signs=tuple(1 if i < spec.q else -1 for i in range(n)))
        if _positive_contributions(n, noise.target, noise.signs) != spec.q:
            raise ValueError("noise realization inconsistent with q")
        dis = np.zeros(dim)
        for i in range(n):
            dis += spec.epsilon * noise.signs[i] * _sigma_z_diag(n, i)
        if isinstance(spec, GroverNoiseStd):
            a = -_transverse_field_sum(n).copy()
        else:
            # Grover-style driver carries the same scale as the target term.
            a = np.full((dim, dim), -spec.target_scale / dim)
        b = -a.copy()
        b[idx, idx] += dis
        b[noise.target, noise.target] += -spec.target_scale
        return a, b
    if isinstance(spec, Tunneling):
        a = -_transverse_field_sum(n).copy()
        b = -a.copy()
        diag = np.zeros(dim)
        for i in range(n):
            diag += -_sigma_z_diag(n, i)
        b[idx, idx] += diag
        for pos, v in enumerate(spec.barriers):
            b[1 << pos, 1 << pos] += v
        return a, b
    if isinstance(spec, MultiSolution):
        a = -_transverse_field_sum(n).copy()
        b = -a.copy()
        for t in spec.targets:
            b[t, t] += -1.0
        return a, b
    if isinstance(spec, MLevelGrover):
        a = np.full((dim, dim), -1.0 / dim)
        b = -a.copy()
        pos = 0
        for e, lam in zip(spec.energies, spec.degeneracies):
            b[idx[pos:pos + lam], idx[pos:pos + lam]] += e
            pos += lam
        return a, b
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def full_hamiltonian(spec: ModelSpec, s: float,
                     noise: Optional[NoiseRealization] = None,
                     target: Optional[int] = None) -> DenseHamiltonian:
    """Dense 2^n x 2^n annealing Hamiltonian in the unrotated frame."""
    a, b = hamiltonian_parts(spec, noise=noise, target=target)
    return DenseHamiltonian(n=spec.n, s=float(s), matrix=a + s * b)


@dataclass(frozen=True)
class SpectraComparison:
    max_deviation: float
    ground_deviation: float
    gap_deviation: float


def _eigvalsh_destructive(matrix: np.ndarray) -> np.ndarray:
    """Dense spectrum via LAPACK; may overwrite its argument."""
    if _scipy_eigvalsh is not None:
        return _scipy_eigvalsh(matrix, driver="evr", overwrite_a=True,
                               check_finite=False)
    return np.linalg.eigvalsh(matrix)


def compare_spectra(recon: reduction.SpectrumReconstruction,
                    dense: DenseHamiltonian) -> SpectraComparison:
    """Max multiset deviation between reconstruction and dense spectrum."""
    return _compare_sorted(recon, _eigvalsh_destructive(dense.matrix.copy()))


def _compare_sorted(recon: reduction.SpectrumReconstruction,
                    full: np.ndarray) -> SpectraComparison:
    mine = recon.as_sorted_array()
    if len(mine) != len(full):
        raise reduction.ModelConstructionError(
            f"multiset sizes differ: {len(mine)} vs {len(full)}"
        )
    dev = float(np.max(np.abs(mine - full))) if len(full) else 0.0
    ground = float(abs(mine[0] - full[0]))
    gap = 0.0
    if len(full) > 1:
        gap = float(abs((mine[1] - mine[0]) - (full[1] - full[0])))
    return SpectraComparison(max_deviation=dev, ground_deviation=ground,
                             gap_deviation=gap)


# ---------------------------------------------------------------------------
# randomized verification protocol


def draw_random_spec(kind: str, n: int, rng):
    """One random model instance plus its oracle realization kwargs."""
    if kind == "grover-plain-grv" or kind == "grover-plain-std":
        driver = models.DRIVER_GROVER if kind.endswith("grv") else models.DRIVER_STANDARD
        ts = float(rng.choice([1.0, float(n)]))
        spec = GroverPlain(n=n, driver=driver, target_scale=ts)
        return spec, {"target": int(rng.integers(0, 2**n))}
    if kind == "grover-noise-std" or kind == "grover-noise-grv":
        cls = GroverNoiseStd if kind.endswith("std") else GroverNoiseGrv
        spec = cls(n=n, epsilon=float(rng.uniform(0.0, 3.0)),
                   q=int(rng.integers(0, n + 1)),
                   target_scale=float(rng.choice([1.0, float(n)])))
        return spec, {"noise": random_noise_realization(spec, rng)}
    if kind == "tunneling":
        spec = Tunneling(n=n, barriers=tuple(rng.uniform(-1.0, 3.0, n)))
        return spec, {}
    if kind == "multi-solution":
        p = int(rng.integers(2, min(2**n, 5) + 1))
        targets = tuple(int(t) for t in rng.choice(2**n, size=p, replace=False))
        return MultiSolution(n=n, targets=targets), {}
    if kind == "m-level":
        m = int(rng.integers(2, min(2**n, 6) + 1))
        cuts = np.sort(rng.choice(np.arange(1, 2**n), size=m - 1, replace=False))
        degens = np.diff(np.concatenate([[0], cuts, [2**n]]))
        energies = np.sort(rng.uniform(-2.0, 2.0, m))
        return MLevelGrover(n=n, energies=tuple(energies),
                            degeneracies=tuple(int(d) for d in degens)), {}
    raise ValueError(f"unknown model kind {kind!r}")


@dataclass
class VerificationReport:
    seed: int
    tolerance: float
    max_deviation: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    cases: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def worst(self) -> float:
        return max(self.max_deviation.values(), default=0.0)


def _verify_task(task):
    """All draws of one (kind, n) cell; returns (worst, failures, cases)."""
    kind, n, draws, s_values, seed, tol = task
    rng = np.random.default_rng([seed, zlib.crc32(kind.encode()), n])
    worst = 0.0
    failures = []
    cases = 0
    work = np.empty((2**n, 2**n))
    for _ in range(draws):
        spec, kwargs = draw_random_spec(kind, n, rng)
        part_a, part_b = hamiltonian_parts(spec, **kwargs)
        for s in s_values:
            decomp, weights = models.build(spec, float(s))
            eff = reduction.assemble_effective(decomp, weights)
            recon = reduction.reconstruct_full_spectrum(decomp, eff)
            np.multiply(part_b, float(s), out=work)
            work += part_a
            cmpres = _compare_sorted(recon, _eigvalsh_destructive(work))
            cases += 1
            worst = max(worst, cmpres.max_deviation)
            if cmpres.max_deviation > tol:
                failures.append((kind, n, float(s), spec, cmpres.max_deviation))
    return worst, failures, cases


def run_verification(n_values=range(3, 11), draws: int = 20,
                     s_values=None, seed: int = 0, tol: float = 1e-9,
                     kinds=MODEL_KINDS, workers: int = 1) -> VerificationReport:
    """Reduction-vs-oracle protocol over random instances of every model.

    For each model kind, each n and each seeded draw, compares the
    reconstructed spectrum against the dense spectrum on a grid of s
    values.  Deviations above ``tol`` are recorded as failures.  The
    (kind, n) cells are independent and seeded individually, so the result
    is identical for any worker count.
    """
    if s_values is None:
        s_values = np.round(np.linspace(0.0, 1.0, 11), 10)
    s_values = tuple(float(s) for s in s_values)
    tasks = [(kind, int(n), draws, s_values, seed, tol)
             for kind in kinds for n in n_values]
    if workers > 1 and len(tasks) > 1:
        from multiprocessing import Pool

        # biggest cells first, one per dispatch, for load balance
        order = sorted(range(len(tasks)), key=lambda i: -tasks[i][1])
        with Pool(processes=workers) as pool:
            done = pool.map(_verify_task, [tasks[i] for i in order], chunksize=1)
        results = [None] * len(tasks)
        for i, res in zip(order, done):
            results[i] = res
    else:
        results = [_verify_task(t) for t in tasks]
    report = VerificationReport(seed=seed, tolerance=tol)
    for (kind, n, *_), (worst, failures, cases) in zip(tasks, results):
        report.max_deviation[kind] = max(report.max_deviation.get(kind, 0.0), worst)
        report.failures.extend(failures)
        report.cases += cases
    return report
