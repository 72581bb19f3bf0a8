"""Metrology with one- and two-mode Gaussian states.

Quantum Fisher information for squeezing estimation under an unknown phase,
the fidelities and entanglement measures it rests on, classical Fisher
information and Cramer-Rao checks, random-state scatter experiments, and a
truncated Fock-space oracle for cross-checking.
"""

__version__ = "0.1.0"

from .exceptions import (
    ConfigurationError,
    GaussmetError,
    InvalidInputError,
    NumericalError,
    StateParseError,
    TruncationError,
)
from .gaussian import (
    GaussianState,
    check_physical,
    coherent,
    coherent_from_photons,
    mean_photon_numbers,
    purity,
    squeezed_from_photons,
    squeezed_vacuum,
    symplectic_eigenvalues,
    thermal,
    tmsv_from_photons,
    two_mode_cm,
    two_mode_squeezed_vacuum,
    vacuum,
)
from .measures import (
    bures_distance_sq,
    classical_overlap,
    coherence,
    entropy,
    gaussian_fidelity,
    hellinger_distance_sq,
    log_negativity,
)
from .qfi import (
    avg_qfi,
    avg_qfi_vs_logneg,
    bound_curve,
    heisenberg_scaling_check,
    homodyne_classical_fi,
    qfi_at_theta,
    quantum_crb,
)
from .symplectic import apply, encode, encoding_map, partial_trace, partial_transpose_B

__all__ = [
    "__version__",
    "ConfigurationError",
    "GaussianState",
    "GaussmetError",
    "InvalidInputError",
    "NumericalError",
    "StateParseError",
    "TruncationError",
    "apply",
    "avg_qfi",
    "avg_qfi_vs_logneg",
    "bound_curve",
    "bures_distance_sq",
    "check_physical",
    "classical_overlap",
    "coherence",
    "coherent",
    "coherent_from_photons",
    "encode",
    "encoding_map",
    "entropy",
    "gaussian_fidelity",
    "heisenberg_scaling_check",
    "hellinger_distance_sq",
    "homodyne_classical_fi",
    "log_negativity",
    "mean_photon_numbers",
    "partial_trace",
    "partial_transpose_B",
    "purity",
    "qfi_at_theta",
    "quantum_crb",
    "squeezed_from_photons",
    "squeezed_vacuum",
    "symplectic_eigenvalues",
    "thermal",
    "tmsv_from_photons",
    "two_mode_cm",
    "two_mode_squeezed_vacuum",
    "vacuum",
]
