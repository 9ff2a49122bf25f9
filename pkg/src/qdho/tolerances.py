"""Central numeric tolerance record.

Everything tolerance-shaped that the library enforces lives here, so there
is exactly one place to audit.  Operations take these as parameter
defaults; callers with looser or tighter needs pass their own.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # linalg
    herm_input: float = 1e-10       # entrywise gate on eigensolver input
    eig_reconstruction: float = 1e-9  # ||x - V diag(w) V^dag||_F / ||x||_F
    jacobi_off: float = 1e-14       # sweep stop: off-diagonal mass vs ||A||_F
    # state containers
    state_norm: float = 1e-9        # |  ||psi||_2 - 1  |
    dm_herm: float = 1e-9           # max |rho - rho^dag| at construction
    dm_trace: float = 1e-9          # |tr rho - 1| at construction
    dm_min_eig: float = -1e-8       # eigenvalue floor at construction
    # evolved states (propagators, closed-form solutions)
    evolved_trace: float = 1e-7
    evolved_min_eig: float = -1e-7
    # truncation adequacy gates
    coherent_tail: float = 1e-10    # discarded Poisson mass
    squeezed_tail: float = 1e-8     # discarded squeezed-vacuum mass
    # 2x2 layer
    gauss_det: float = 1e-10        # |det - 1| gate on decomposition input
    gauss_pivot: float = 1e-12      # |d| below this is reported singular


DEFAULT = Tolerances()
