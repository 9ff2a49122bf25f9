"""Quantum damped harmonic oscillator on a truncated Fock space.

Closed-form solution of the damped-oscillator master equation (module
`analytic`), independent brute-force propagators to check it against
(module `lindblad`), and the supporting Fock-space / dense linear algebra
layers.  `BACKEND` names the kernel implementation selected at import,
"compiled" or "pure".
"""

from ._backend import BACKEND
from .analytic import (
    ClassicalParams,
    EFGCoefficients,
    classical_trajectory,
    classical_trajectory_approx,
    coherent_solution,
    disentangle_check,
    efg,
    gauss_decompose,
    general_solution,
    nu_zero_solution,
    riccati_residual,
    shuffle_check,
    superop_disentangle_check,
    two_by_two_exponential,
    vacuum_solution,
)
from .fock import (
    DensityMatrix,
    FockSpace,
    StateVector,
    TruncationError,
    annihilation,
    coherent_state,
    coherent_state_via_displacement,
    creation,
    density_from_pure,
    fock_state,
    number,
    squeezed_state,
)
from .lindblad import (
    Liouvillian,
    ModelParams,
    build_liouvillian,
    master_rhs,
    propagate_expm,
    propagate_rk4,
)
from .linalg import expm, hermitian_eig, hermitian_eigenvalues
from .observables import ObservableRecord, observe
from .tolerances import Tolerances

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ClassicalParams",
    "DensityMatrix",
    "EFGCoefficients",
    "FockSpace",
    "Liouvillian",
    "ModelParams",
    "ObservableRecord",
    "StateVector",
    "Tolerances",
    "TruncationError",
    "annihilation",
    "build_liouvillian",
    "classical_trajectory",
    "classical_trajectory_approx",
    "coherent_solution",
    "coherent_state",
    "coherent_state_via_displacement",
    "creation",
    "density_from_pure",
    "disentangle_check",
    "efg",
    "expm",
    "fock_state",
    "gauss_decompose",
    "general_solution",
    "hermitian_eig",
    "hermitian_eigenvalues",
    "master_rhs",
    "nu_zero_solution",
    "number",
    "observe",
    "propagate_expm",
    "propagate_rk4",
    "riccati_residual",
    "shuffle_check",
    "squeezed_state",
    "superop_disentangle_check",
    "two_by_two_exponential",
    "vacuum_solution",
    "__version__",
]
