"""Three bilinearly coupled quantum harmonic oscillators, solved exactly.

Decoupling by a three-angle rotation, spectra and stationary states, and
the ground-state entanglement of each oscillator with the other two, all
validated against brute-force numerical oracles.
"""

from .decouple import (
    LogFrequencyParams,
    NormalModes,
    decouple,
    extract_angles,
    forward,
    jacobi_eigensystem,
    log_params,
    reconstruction_residual,
)
from .entangle import (
    PurityResult,
    ReducedDensityParams,
    purity,
    purity_closed_form,
    purity_from_lw,
    reduced_density_params,
)
from .errors import (
    ConvergenceError,
    DomainError,
    GimbalLockError,
    InstabilityError,
    OracleAccuracyError,
    PairLimitError,
)
from .limits import PairParams, pair_params, purity_two_body, verify_pair_limit
from .model import (
    CouplingMatrix,
    NormalizedSystem,
    OscillatorSystem,
    coupling_matrix,
    is_stable,
    normalize,
    system_from_dict,
    system_from_json,
    system_to_dict,
)
from .oracle import (
    DEFAULT_GRID,
    QuadratureGrid,
    characteristic_lengths,
    eigen3_charpoly,
    fd_hamiltonian_residual,
    quad_normalization,
    quad_purity,
)
from .spectrum import (
    GaussianGroundState,
    QuantumNumbers,
    energy,
    ground_gaussian,
    hermite_values,
    to_normal_coords,
    wavefunction,
)
from .su3 import (
    GELL_MANN,
    EulerAngles,
    RotationMatrix,
    commutator_residual,
    conjugation_residuals,
    gell_mann,
    matrix_exponential,
    rotation,
    rotation_via_exponentials,
    structure_constant,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "CouplingMatrix",
    "DEFAULT_GRID",
    "DomainError",
    "EulerAngles",
    "GELL_MANN",
    "GaussianGroundState",
    "GimbalLockError",
    "InstabilityError",
    "LogFrequencyParams",
    "NormalModes",
    "NormalizedSystem",
    "OracleAccuracyError",
    "OscillatorSystem",
    "PairLimitError",
    "PairParams",
    "PurityResult",
    "QuadratureGrid",
    "QuantumNumbers",
    "ReducedDensityParams",
    "RotationMatrix",
    "commutator_residual",
    "conjugation_residuals",
    "coupling_matrix",
    "decouple",
    "characteristic_lengths",
    "eigen3_charpoly",
    "energy",
    "extract_angles",
    "fd_hamiltonian_residual",
    "forward",
    "jacobi_eigensystem",
    "gell_mann",
    "ground_gaussian",
    "hermite_values",
    "is_stable",
    "log_params",
    "matrix_exponential",
    "normalize",
    "pair_params",
    "purity",
    "purity_closed_form",
    "purity_from_lw",
    "purity_two_body",
    "quad_normalization",
    "quad_purity",
    "reconstruction_residual",
    "reduced_density_params",
    "rotation",
    "rotation_via_exponentials",
    "structure_constant",
    "system_from_dict",
    "system_from_json",
    "system_to_dict",
    "to_normal_coords",
    "verify_pair_limit",
    "wavefunction",
]
