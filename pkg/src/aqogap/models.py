"""Model zoo: each model maps (spec, s) to a level decomposition.

Every model rewrites its annealing Hamiltonian as a highly degenerate part
plus a handful of rank-1 projectors and supplies the closed-form projection
norms Z_alpha(E) and per-level overlap matrices:

* ``GroverPlain`` -- unstructured search, Grover-style or transverse-field
  driver, with a selectable target energy scale (1 or n; both conventions
  appear in the literature).
* ``GroverNoiseStd`` -- search target plus binomial +/-epsilon sigma^z
  disorder, transverse-field driver.  After a spin-flip gauge that leaves
  the spectrum unchanged, only the Hamming weight q of the rotated target
  enters; the decomposition lives on the n+1 levels of the rotated field.
* ``GroverNoiseGrv`` -- same disorder with the Grover-style driver; the
  diagonal disorder becomes the degenerate part and the two rank-1 terms
  (target and uniform state) carry s-dependent weights.
* ``Tunneling`` -- Hamming-weight problem with a barrier V_alpha on each
  single-down-spin state.
* ``MultiSolution`` -- p search targets; per-level overlaps are normalized
  Krawtchouk polynomial values in the pairwise Hamming distances.
* ``MLevelGrover`` -- arbitrary M-level diagonal spectrum with the
  Grover-style driver; only the level degeneracies enter.

All builders are pure and dtype-generic; passing ``numpy.longdouble``
produces an extended-precision decomposition for gap refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np

from .numkit import SignedLogReal, log_binomial_row, log_factorials, signed_logsumexp
from .reduction import Level, LevelDecomposition, ProjectorWeights

__all__ = [
    "DRIVER_GROVER",
    "DRIVER_STANDARD",
    "GroverPlain",
    "GroverNoiseStd",
    "GroverNoiseGrv",
    "Tunneling",
    "MultiSolution",
    "MLevelGrover",
    "ModelSpec",
    "DriverAngles",
    "driver_angles",
    "zk_noisy_standard",
    "tunneling_level_data",
    "krawtchouk_overlap",
    "build",
    "reduced_dimension",
    "spec_from_config",
    "spec_to_config",
]

DRIVER_GROVER = "grover"
DRIVER_STANDARD = "standard"


# ---------------------------------------------------------------------------
# model specifications


@dataclass(frozen=True)
class GroverPlain:
    """Noiseless search: driver is 'grover' or 'standard', target energy
    -target_scale."""

    n: int
    driver: str
    target_scale: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.driver not in (DRIVER_GROVER, DRIVER_STANDARD):
            raise ValueError(f"unknown driver {self.driver!r}")


@dataclass(frozen=True)
class GroverNoiseStd:
    """Noisy search, standard driver; q = Hamming weight of the rotated
    target.  target_scale defaults to n (extensive target energy)."""

    n: int
    epsilon: float
    q: int
    target_scale: float = -1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if not (0 <= self.q <= self.n):
            raise ValueError(f"q={self.q} outside [0, n]")
        if self.target_scale <= 0:
            object.__setattr__(self, "target_scale", float(self.n))


@dataclass(frozen=True)
class GroverNoiseGrv:
    """Noisy search, Grover-style driver; target_scale multiplies both
    rank-1 terms (target and uniform state) and defaults to n."""

    n: int
    epsilon: float
    q: int
    target_scale: float = -1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if not (0 <= self.q <= self.n):
            raise ValueError(f"q={self.q} outside [0, n]")
        if self.target_scale <= 0:
            object.__setattr__(self, "target_scale", float(self.n))


@dataclass(frozen=True)
class Tunneling:
    """Hamming-weight problem with barriers V_alpha on single-down states."""

    n: int
    barriers: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.n > 64:
            raise ValueError("tunneling sweeps are capped at n <= 64")
        barriers = tuple(float(v) for v in self.barriers)
        if len(barriers) != self.n:
            raise ValueError(f"need {self.n} barriers, got {len(barriers)}")
        object.__setattr__(self, "barriers", barriers)


@dataclass(frozen=True)
class MultiSolution:
    """Search with p target states, standard driver; targets are n-bit
    masks stored as integers."""

    n: int
    targets: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        targets = tuple(int(t) for t in self.targets)
        if not targets:
            raise ValueError("need at least one target")
        if len(set(targets)) != len(targets):
            raise ValueError("targets must be distinct")
        for t in targets:
            if not (0 <= t < 2**self.n):
                raise ValueError(f"target {t} outside n={self.n} register")
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class MLevelGrover:
    """Arbitrary M-level diagonal problem with the Grover-style driver."""

    n: int
    energies: tuple
    degeneracies: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        energies = tuple(float(e) for e in self.energies)
        degens = tuple(int(d) for d in self.degeneracies)
        if len(energies) != len(degens) or not energies:
            raise ValueError("energies and degeneracies must be equal-length, non-empty")
        if any(d < 1 for d in degens):
            raise ValueError("degeneracies must be positive")
        if sum(degens) != 2**self.n:
            raise ValueError(f"degeneracies sum to {sum(degens)}, expected 2^{self.n}")
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "degeneracies", degens)


ModelSpec = Union[GroverPlain, GroverNoiseStd, GroverNoiseGrv, Tunneling,
                  MultiSolution, MLevelGrover]


# ---------------------------------------------------------------------------
# driver rotation angles


@dataclass(frozen=True)
class DriverAngles:
    """Rotation data of the dressed single-spin driver term.

    gamma(s) = sqrt((s eps)^2 + (1-s)^2); sin(phi) = s eps / gamma.  The
    dressed spin eigenstates are cos(theta)|0> + sin(theta)|1> and its
    orthogonal complement with cos(theta) = sqrt((1+sin phi)/2), i.e.
    theta = pi/4 - phi/2.  At s=0 this gives theta = pi/4 (balanced
    superposition); at sin(phi)=1 it gives theta = 0 (pure sigma^z).
    """

    gamma: float
    phi: float
    theta: float
    sin_theta: float
    cos_theta: float


def driver_angles(s, epsilon, dtype=np.float64) -> DriverAngles:
    """Angles for the dressed driver at schedule point s.

    For the tunneling model call with epsilon = 1.  The degenerate corner
    s=1, epsilon=0 (gamma = 0) returns phi = 0; the a(s) coefficient
    vanishes there so the direction is immaterial.
    """
    s = dtype(s)
    eps = dtype(epsilon)
    one = dtype(1)
    gamma = np.hypot(s * eps, one - s)
    sin_phi = s * eps / gamma if gamma > 0 else dtype(0)
    sin_phi = min(sin_phi, one)
    cos_t = np.sqrt((one + sin_phi) / 2)
    sin_t = np.sqrt((one - sin_phi) / 2)
    phi = np.arcsin(sin_phi)
    theta = np.arcsin(sin_t)
    return DriverAngles(gamma=gamma, phi=phi, theta=theta,
                        sin_theta=sin_t, cos_theta=cos_t)


# ---------------------------------------------------------------------------
# closed-form projection data


@lru_cache(maxsize=128)
def _log_factorials_cached(n: int, dtype_name: str) -> np.ndarray:
    return log_factorials(n, dtype=np.dtype(dtype_name))


def _zk_profile(n: int, q: int, sin_t, cos_t, dtype) -> np.ndarray:
    """Z_k for k = 0..n: projection norms of a weight-q basis state onto
    the levels of the dressed field, via a log-domain binomial sum."""
    if sin_t == 0:
        out = np.zeros(n + 1, dtype=dtype)
        out[q] = 1
        return out
    if cos_t == 0:
        out = np.zeros(n + 1, dtype=dtype)
        out[n - q] = 1
        return out
    lf = _log_factorials_cached(n, np.dtype(dtype).name)
    ls = np.log(sin_t)
    lcos = np.log(cos_t)
    z2 = np.zeros(n + 1, dtype=dtype)
    for k in range(n + 1):
        lo = max(0, k - (n - q))
        hi = min(k, q)
        l = np.arange(lo, hi + 1)
        if len(l) == 0:
            continue
        es = 2 * (q - l) + 2 * (k - l)
        terms = (lf[q] - lf[l] - lf[q - l]
                 + lf[n - q] - lf[k - l] - lf[n - q - k + l]
                 + es * ls + (2 * n - es) * lcos)
        top = np.max(terms)
        z2[k] = np.exp(top) * np.sum(np.exp(terms - top))
    return np.sqrt(z2)


def zk_noisy_standard(n: int, q: int, k: int, theta: float) -> SignedLogReal:
    """Single projection norm Z_k as a signed log-domain scalar.

    Sums C(q,l) C(n-q,k-l) sin^{2(q-l)+2(k-l)} cos^{2n-...} over l and
    takes the square root; always nonnegative.
    """
    if not (0 <= q <= n and 0 <= k <= n):
        raise ValueError("q and k must lie in [0, n]")
    st = math.sin(theta)
    ct = math.cos(theta)
    if st == 0 or ct == 0:
        hit = (k == q) if st == 0 else (k == n - q)
        return SignedLogReal(1, 0.0) if hit else SignedLogReal.zero()
    terms = []
    for l in range(max(0, k - (n - q)), min(k, q) + 1):
        es = 2 * (q - l) + 2 * (k - l)
        logmag = (float(_log_c(n, q, l)) + float(_log_c_pair(n, q, k, l))
                  + es * math.log(st) + (2 * n - es) * math.log(ct))
        terms.append(SignedLogReal(1, logmag))
    total = signed_logsumexp(terms)
    if total.sign == 0:
        return total
    return SignedLogReal(1, total.logmag / 2)


def _log_c(n: int, q: int, l: int) -> float:
    lf = _log_factorials_cached(n, "float64")
    return lf[q] - lf[l] - lf[q - l]


def _log_c_pair(n: int, q: int, k: int, l: int) -> float:
    lf = _log_factorials_cached(n, "float64")
    return lf[n - q] - lf[k - l] - lf[n - q - k + l]


def tunneling_level_data(n: int, k: int, theta):
    """(Z, off-diagonal overlap) for level k of the tunneling model.

    Z is identical for every barrier index alpha; the level overlap matrix
    has unit diagonal and a single off-diagonal value.  Both closed forms
    are evaluated in branch-stable form; theta -> 0 and theta -> pi/2 are
    handled by their limits.
    """
    if n < 1 or not (0 <= k <= n):
        raise ValueError("need n >= 1 and 0 <= k <= n")
    dtype = np.result_type(type(theta) if isinstance(theta, np.generic) else np.float64)
    one = dtype.type(1)
    st = np.sin(dtype.type(theta))
    ct = np.cos(dtype.type(theta))
    lf = _log_factorials_cached(n, np.dtype(dtype).name)
    lc = lf[n] - lf[k] - lf[n - k]
    # Z^2 = C(n,k) [ (k/n) st^{2k-2} ct^{2n-2k+2} + ((n-k)/n) st^{2k+2} ct^{2n-2k-2} ]
    # assembled in log space; a term is dropped when one of its strictly
    # positive exponents sits on a vanishing base.
    logs = []
    if k >= 1 and ct > 0 and (st > 0 or k == 1):
        term = lc + np.log(dtype.type(k) / n) + (2 * n - 2 * k + 2) * np.log(ct)
        if k > 1:
            term = term + (2 * k - 2) * np.log(st)
        logs.append(term)
    if k <= n - 1 and st > 0 and (ct > 0 or k == n - 1):
        term = lc + np.log(dtype.type(n - k) / n) + (2 * k + 2) * np.log(st)
        if k < n - 1:
            term = term + (2 * n - 2 * k - 2) * np.log(ct)
        logs.append(term)
    if not logs:
        z = dtype.type(0)
    else:
        top = max(logs)
        z = np.exp(top / 2) * np.sqrt(sum(np.exp(t - top) for t in logs))

    if n == 1 or k == 0 or k == n:
        return z, one
    # off-diagonal: multiply numerator and denominator by tan^2 (t <= 1
    # branch) or tan^{-2} so neither boundary divides by zero.
    if st <= ct:
        t2 = (st / ct) ** 2
        num = k * (k - 1) - 2 * k * (n - k) * t2 + (n - k) * (n - k - 1) * t2 * t2
        den = (n - 1) * (k + (n - k) * t2 * t2)
    else:
        u2 = (ct / st) ** 2
        num = k * (k - 1) * u2 * u2 - 2 * k * (n - k) * u2 + (n - k) * (n - k - 1)
        den = (n - 1) * (k * u2 * u2 + (n - k))
    return z, num / den


@lru_cache(maxsize=None)
def _kraw_cached(n: int, u: int, d: int) -> float:
    terms = []
    lf = _log_factorials_cached(n, "float64")
    for l in range(0, min(d, u) + 1):
        if u - l > n - d:
            continue
        logmag = (lf[d] - lf[l] - lf[d - l]) + (lf[n - d] - lf[u - l] - lf[n - d - u + l])
        terms.append(SignedLogReal(1 if l % 2 == 0 else -1, logmag))
    total = signed_logsumexp(terms)
    log_norm = lf[n] - lf[u] - lf[n - u]
    value = total.scaled(-log_norm).to_real()
    return float(np.clip(value, -1.0, 1.0))


def krawtchouk_overlap(n: int, u: int, d: int) -> float:
    """Normalized overlap of two weight-u projections at Hamming distance d:
    (1/C(n,u)) sum_l (-1)^l C(d,l) C(n-d,u-l).  Always in [-1, 1]."""
    if not (0 <= u <= n and 0 <= d <= n):
        raise ValueError("u and d must lie in [0, n]")
    if d == 0 or u == 0:
        return 1.0
    return _kraw_cached(n, u, d)


# ---------------------------------------------------------------------------
# builders

_BINOMIALS_CACHE: dict = {}


def _binomials(n: int) -> tuple:
    if n not in _BINOMIALS_CACHE:
        _BINOMIALS_CACHE[n] = tuple(math.comb(n, k) for k in range(n + 1))
    return _BINOMIALS_CACHE[n]


def _build_grover_plain(spec: GroverPlain, s, dtype):
    n = spec.n
    ts = dtype(spec.target_scale)
    s = dtype(s)
    if spec.driver == DRIVER_GROVER:
        # H_A = -|psi_0><psi_0| with levels {-1, 0}; the target overlaps
        # the uniform state with amplitude 2^{-n/2}.
        z_minus = np.exp(-n * np.log(dtype(2)) / 2)
        z_zero = np.sqrt(dtype(1) - z_minus * z_minus)
        levels = (
            Level(energy=-1.0, degeneracy=1,
                  z=np.array([z_minus]), gram=np.eye(1, dtype=dtype)),
            Level(energy=0.0, degeneracy=2**n - 1,
                  z=np.array([z_zero]), gram=np.eye(1, dtype=dtype)),
        )
        decomp = LevelDecomposition(s=float(s), a_coeff=dtype(1) - s, b_coeff=dtype(1),
                                    n_qubits=n, levels=levels)
        weights = ProjectorWeights(count=1, chi=lambda sv: np.array([-ts * dtype(sv)]))
        return decomp, weights
    return _build_noise_std_like(n, dtype(0), 0, ts, s, dtype)


def _build_noise_std_like(n, eps, q, ts, s, dtype):
    ang = driver_angles(s, eps, dtype=dtype)
    zrow = _zk_profile(n, q, ang.sin_theta, ang.cos_theta, dtype)
    binom = _binomials(n)
    gram1 = np.eye(1, dtype=dtype)
    levels = tuple(
        Level(energy=float(2 * k - n), degeneracy=binom[k],
              z=zrow[k:k + 1], gram=gram1)
        for k in range(n + 1)
    )
    decomp = LevelDecomposition(s=float(s), a_coeff=ang.gamma, b_coeff=dtype(1),
                                n_qubits=n, levels=levels)
    weights = ProjectorWeights(count=1, chi=lambda sv: np.array([-ts * dtype(sv)]))
    return decomp, weights


def _build_noise_std(spec: GroverNoiseStd, s, dtype):
    return _build_noise_std_like(spec.n, dtype(spec.epsilon), spec.q,
                                 dtype(spec.target_scale), dtype(s), dtype)


def _build_noise_grv(spec: GroverNoiseGrv, s, dtype):
    n, q = spec.n, spec.q
    s = dtype(s)
    ts = dtype(spec.target_scale)
    binom = _binomials(n)
    log_binom = log_binomial_row(n, dtype=dtype)
    z_uniform = np.exp((log_binom - n * np.log(dtype(2))) / 2)
    alpha = np.exp(-log_binom[q] / 2)
    levels = []
    for k in range(n + 1):
        z = np.array([dtype(1) if k == q else dtype(0), z_uniform[k]])
        gram = np.eye(2, dtype=dtype)
        if k == q:
            gram[0, 1] = gram[1, 0] = alpha
        levels.append(Level(energy=float(2 * k - n), degeneracy=binom[k], z=z, gram=gram))
    decomp = LevelDecomposition(s=float(s), a_coeff=s * dtype(spec.epsilon),
                                b_coeff=dtype(1), n_qubits=n, levels=tuple(levels))

    def chi(sv):
        sv = dtype(sv)
        return np.array([-ts * sv, -ts * (dtype(1) - sv)])

    weights = ProjectorWeights(count=2, chi=chi)
    return decomp, weights


def _build_tunneling(spec: Tunneling, s, dtype):
    n = spec.n
    s = dtype(s)
    ang = driver_angles(s, 1.0, dtype=dtype)
    binom = _binomials(n)
    levels = []
    for k in range(n + 1):
        z, off = tunneling_level_data(n, k, ang.theta)
        gram = np.full((n, n), off, dtype=dtype)
        np.fill_diagonal(gram, dtype(1))
        levels.append(Level(energy=float(2 * k - n), degeneracy=binom[k],
                            z=np.full(n, z, dtype=dtype), gram=gram))
    decomp = LevelDecomposition(s=float(s), a_coeff=ang.gamma, b_coeff=dtype(1),
                                n_qubits=n, levels=tuple(levels))
    barriers = np.asarray(spec.barriers, dtype=dtype)
    weights = ProjectorWeights(count=n, chi=lambda sv: dtype(sv) * barriers)
    return decomp, weights


@lru_cache(maxsize=64)
def _multisol_grams(n: int, targets: tuple, dtype_name: str):
    """Per-level Gram stack for a multi-solution spec (s-independent)."""
    dtype = np.dtype(dtype_name)
    p = len(targets)
    dist = [[(a ^ b).bit_count() for b in targets] for a in targets]
    grams = []
    for u in range(n + 1):
        g = np.empty((p, p), dtype=dtype)
        for i in range(p):
            g[i, i] = 1
            for j in range(i + 1, p):
                g[i, j] = g[j, i] = krawtchouk_overlap(n, u, dist[i][j])
        grams.append(g)
    return tuple(grams)


def _build_multisol(spec: MultiSolution, s, dtype):
    n = spec.n
    p = len(spec.targets)
    s = dtype(s)
    binom = _binomials(n)
    log_binom = log_binomial_row(n, dtype=dtype)
    z_uniform = np.exp((log_binom - n * np.log(dtype(2))) / 2)
    grams = _multisol_grams(n, spec.targets, np.dtype(dtype).name)
    levels = tuple(
        Level(energy=float(2 * u - n), degeneracy=binom[u],
              z=np.full(p, z_uniform[u], dtype=dtype), gram=grams[u])
        for u in range(n + 1)
    )
    decomp = LevelDecomposition(s=float(s), a_coeff=dtype(1) - s, b_coeff=dtype(1),
                                n_qubits=n, levels=levels)
    weights = ProjectorWeights(count=p, chi=lambda sv: np.full(p, -dtype(sv)))
    return decomp, weights


def _build_mlevel(spec: MLevelGrover, s, dtype):
    n = spec.n
    s = dtype(s)
    gram1 = np.eye(1, dtype=dtype)
    two_n = dtype(2) ** n
    levels = tuple(
        Level(energy=e, degeneracy=lam,
              z=np.array([np.sqrt(dtype(lam) / two_n)]), gram=gram1)
        for e, lam in zip(spec.energies, spec.degeneracies)
    )
    decomp = LevelDecomposition(s=float(s), a_coeff=s, b_coeff=dtype(1),
                                n_qubits=n, levels=levels)
    weights = ProjectorWeights(count=1, chi=lambda sv: np.array([-(dtype(1) - dtype(sv))]))
    return decomp, weights


_BUILDERS = {
    GroverPlain: _build_grover_plain,
    GroverNoiseStd: _build_noise_std,
    GroverNoiseGrv: _build_noise_grv,
    Tunneling: _build_tunneling,
    MultiSolution: _build_multisol,
    MLevelGrover: _build_mlevel,
}


def build(spec: ModelSpec, s: float, dtype=np.float64):
    """Level decomposition + projector weights for a model at schedule
    point s in [0, 1]."""
    if not (0.0 <= float(s) <= 1.0):
        raise ValueError(f"s={s} outside [0, 1]")
    try:
        builder = _BUILDERS[type(spec)]
    except KeyError:
        raise TypeError(f"unknown model spec {type(spec).__name__}") from None
    return builder(spec, s, np.dtype(dtype).type)


def reduced_dimension(spec: ModelSpec, s: float = 0.5) -> int:
    """Dimension of the effective block at schedule point s."""
    from .reduction import assemble_effective

    decomp, weights = build(spec, s)
    return assemble_effective(decomp, weights).matrix.shape[0]


# ---------------------------------------------------------------------------
# flat key=value serialization (the CLI's config format)


def spec_from_config(cfg: dict) -> ModelSpec:
    """Build a model spec from a flat string-keyed mapping.

    Recognized keys: model, n, epsilon, q, target_scale, barriers
    (comma-separated reals), targets (comma-separated bit strings),
    energies, degeneracies (comma-separated).  See the CLI help for the
    model names.
    """
    try:
        name = cfg["model"]
        n = int(cfg["n"])
    except KeyError as exc:
        raise ValueError(f"config missing required key {exc}") from None
    if name in ("grover-plain-grv", "grover-plain-std"):
        driver = DRIVER_GROVER if name.endswith("grv") else DRIVER_STANDARD
        return GroverPlain(n=n, driver=driver,
                           target_scale=float(cfg.get("target_scale", 1.0)))
    if name in ("grover-noise-std", "grover-noise-grv"):
        cls = GroverNoiseStd if name.endswith("std") else GroverNoiseGrv
        return cls(n=n, epsilon=float(cfg.get("epsilon", 0.0)),
                   q=int(cfg.get("q", 0)),
                   target_scale=float(cfg.get("target_scale", -1.0)))
    if name == "tunneling":
        barriers = _parse_list(cfg["barriers"], float)
        return Tunneling(n=n, barriers=tuple(barriers))
    if name == "multi-solution":
        raw = _parse_list(cfg["targets"], str)
        targets = []
        for t in raw:
            if set(t) <= {"0", "1"} and len(t) == n:
                targets.append(int(t, 2))
            else:
                targets.append(int(t))
        return MultiSolution(n=n, targets=tuple(targets))
    if name == "m-level":
        energies = _parse_list(cfg["energies"], float)
        degens = _parse_list(cfg["degeneracies"], int)
        return MLevelGrover(n=n, energies=tuple(energies), degeneracies=tuple(degens))
    raise ValueError(f"unknown model {name!r}")


def spec_to_config(spec: ModelSpec) -> dict:
    """Inverse of :func:`spec_from_config` (targets as bit strings)."""
    if isinstance(spec, GroverPlain):
        name = "grover-plain-grv" if spec.driver == DRIVER_GROVER else "grover-plain-std"
        return {"model": name, "n": str(spec.n), "target_scale": repr(spec.target_scale)}
    if isinstance(spec, (GroverNoiseStd, GroverNoiseGrv)):
        name = "grover-noise-std" if isinstance(spec, GroverNoiseStd) else "grover-noise-grv"
        return {"model": name, "n": str(spec.n), "epsilon": repr(spec.epsilon),
                "q": str(spec.q), "target_scale": repr(spec.target_scale)}
    if isinstance(spec, Tunneling):
        return {"model": "tunneling", "n": str(spec.n),
                "barriers": ",".join(repr(v) for v in spec.barriers)}
    if isinstance(spec, MultiSolution):
        return {"model": "multi-solution", "n": str(spec.n),
                "targets": ",".join(format(t, f"0{spec.n}b") for t in spec.targets)}
    if isinstance(spec, MLevelGrover):
        return {"model": "m-level", "n": str(spec.n),
                "energies": ",".join(repr(e) for e in spec.energies),
                "degeneracies": ",".join(str(d) for d in spec.degeneracies)}
    raise TypeError(f"unknown model spec {type(spec).__name__}")


def _parse_list(raw: str, conv):
    items = [x.strip() for x in str(raw).split(",") if x.strip()]
    return [conv(x) for x in items]
