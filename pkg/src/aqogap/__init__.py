"""aqogap: exact dimensionality reduction for adiabatic quantum optimization.

Splits annealing Hamiltonians into a highly degenerate part plus a few
rank-1 projectors, reduces them exactly to a polynomially small block,
and computes spectral gaps, annealing times, computational times and
scaling exponents -- verified against a brute-force full-Hilbert-space
oracle at small qubit counts.
"""

from ._kernels import backend_name
from .annealing import (GapProfile, ScalingFit, TcompResult, analytic_scaling,
                        fit_exponent, gap_at, gap_profile,
                        log2_t_ann_grover_override, q_distribution, q_epsilon,
                        t_ann_linear, t_ann_optimal, t_comp)
from .models import (DriverAngles, GroverNoiseGrv, GroverNoiseStd, GroverPlain,
                     MLevelGrover, ModelSpec, MultiSolution, Tunneling, build,
                     driver_angles, krawtchouk_overlap, reduced_dimension,
                     spec_from_config, spec_to_config, tunneling_level_data,
                     zk_noisy_standard)
from .numkit import (CholFactor, NotPositiveSemidefinite, SignedLogReal, eigh,
                     eigenvalues, log_binomial, pivoted_psd_cholesky,
                     signed_logsumexp)
from .oracle import compare_spectra, full_hamiltonian, run_verification
from .reduction import (EffectiveHamiltonian, Level, LevelDecomposition,
                        ProjectorWeights, SpectrumReconstruction,
                        assemble_effective, orthogonalize_level,
                        reconstruct_full_spectrum)

__version__ = "0.1.0"
