"""The damped-oscillator model: master-equation right-hand side, the
vectorized generator, and two independent brute-force propagators.

These propagators know nothing about the closed-form solutions; they are
the oracles the analytic layer is judged against.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import fock, linalg
from .fock import DensityMatrix, FockSpace
from .tolerances import DEFAULT as TOL


@dataclass(frozen=True)
class ModelParams:
    """Frequency omega and damping rates mu > nu >= 0 on a truncated space.

    The strict inequality is structural: every closed form downstream
    divides by (mu - nu), so the critical case is rejected here rather
    than special-cased everywhere.
    """

    omega: float
    mu: float
    nu: float
    space: FockSpace

    def __post_init__(self):
        if not (self.mu > self.nu >= 0.0):
            raise ValueError(
                f"need mu > nu >= 0, got mu={self.mu}, nu={self.nu}")


@dataclass(frozen=True)
class Liouvillian:
    params: ModelParams
    matrix: np.ndarray


def k_plus(space):
    """Pair raising generator a^dag (x) a^dag on the doubled space."""
    adg = fock.creation(space)
    return linalg.kron(adg, adg)


def k_minus(space):
    """Pair lowering generator a (x) a."""
    a = fock.annihilation(space)
    return linalg.kron(a, a)


def k3(space):
    """(N (x) 1 + 1 (x) N + 1 (x) 1) / 2."""
    nmat = fock.number(space)
    ident = np.eye(space.dim, dtype=np.complex128)
    return (linalg.kron(nmat, ident) + linalg.kron(ident, nmat)
            + linalg.kron(ident, ident)) / 2.0


def k0(space):
    """N (x) 1 - 1 (x) N; commutes with the other three generators."""
    nmat = fock.number(space)
    ident = np.eye(space.dim, dtype=np.complex128)
    return linalg.kron(nmat, ident) - linalg.kron(ident, nmat)


def _rhs(omega, mu, nu, a, adg, nmat, m):
    # number-operator rewrite of the dissipator; see master_rhs docstring
    nm = nmat @ m
    mn = m @ nmat
    return (-1j * omega * (nm - mn)
            + mu * (a @ m @ adg)
            + nu * (adg @ m @ a)
            - 0.5 * (mu + nu) * (nm + mn + m)
            + 0.5 * (mu - nu) * m)


def master_rhs(params, rho):
    """Time derivative of rho, directly in matrix form.

    Evaluated in the number-operator rewrite of the damping brackets
    (a a^dag collapsed to N + 1 before truncation), which is the form the
    vectorized generator is built from.  On the truncated space the two
    routes then agree entrywise; the only truncation artifact left is the
    top-level leak tr(rhs) = -nu * dim * rho[dim-1, dim-1], which vanishes
    for interior-supported states.

    Accepts a DensityMatrix or a plain (dim, dim) array; trace-free and
    non-Hermitian inputs are fine (the propagator's intermediate stages
    use them).
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else \
        np.asarray(rho, dtype=np.complex128)
    space = params.space
    if m.shape != (space.dim, space.dim):
        raise ValueError(f"shape {m.shape} does not match dim {space.dim}")
    return _rhs(params.omega, params.mu, params.nu,
                fock.annihilation(space), fock.creation(space),
                fock.number(space), m)


def build_liouvillian(params):
    """The dim^2 x dim^2 generator of d/dt vec(rho) = L vec(rho).

    Row-major convention: vec(A X B) = kron(A, B.T) vec(X).  The truncated
    a and a^dag are real matrices, so the transposes collapse to swaps of
    a and a^dag.
    """
    space = params.space
    a = fock.annihilation(space)
    adg = fock.creation(space)
    nmat = fock.number(space)
    ident = np.eye(space.dim, dtype=np.complex128)
    n_left = linalg.kron(nmat, ident)
    n_right = linalg.kron(ident, nmat)  # N.T == N
    eye2 = linalg.kron(ident, ident)
    mat = (-1j * params.omega * (n_left - n_right)
           + params.mu * linalg.kron(a, a)        # a rho a^dag
           + params.nu * linalg.kron(adg, adg)    # a^dag rho a
           - 0.5 * (params.mu + params.nu) * (n_left + n_right + eye2)
           + 0.5 * (params.mu - params.nu) * eye2)
    return Liouvillian(params, mat)


def propagate_expm(params, rho0, t, liouvillian=None):
    """rho(t) = unvec(expm(t L) vec(rho0)).

    The result is symmetrized (rho + rho^dag)/2 but its trace is NOT
    renormalized: trace drift stays visible as an error signal.  Pass a
    prebuilt Liouvillian to amortize construction over many times.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return rho0
    liou = liouvillian if liouvillian is not None else \
        build_liouvillian(params)
    d = params.space.dim
    prop = linalg.expm(t * liou.matrix)
    m = linalg.devectorize(prop @ linalg.vectorize(rho0.matrix), d, d)
    if not np.isfinite(m).all():
        raise OverflowError(f"propagation overflowed at t={t}")
    m = (m + m.conj().T) / 2.0
    return DensityMatrix(params.space, m, trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)


def propagate_rk4(params, rho0, t, dt=None):
    """Classical fixed-step RK4 on the matrix ODE.

    dt defaults to t/2048; the final partial step is shortened to land
    exactly on t.  Same return policy as propagate_expm.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return rho0
    if dt is None:
        dt = t / 2048.0
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt > t:
        raise ValueError(f"dt={dt} exceeds t={t}")
    space = params.space
    a = fock.annihilation(space)
    adg = fock.creation(space)
    nmat = fock.number(space)
    om, mu, nu = params.omega, params.mu, params.nu

    def f(x):
        return _rhs(om, mu, nu, a, adg, nmat, x)

    steps = int(math.floor(t / dt + 1e-12))
    tail = t - steps * dt
    m = rho0.matrix.copy()
    for k in range(steps + 1):
        h = dt if k < steps else tail
        if h <= 0.0:
            continue
        k1 = f(m)
        k2 = f(m + 0.5 * h * k1)
        k3_ = f(m + 0.5 * h * k2)
        k4 = f(m + h * k3_)
        m = m + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3_ + k4)
    if not np.isfinite(m).all():
        raise OverflowError(f"integration overflowed at t={t}")
    m = (m + m.conj().T) / 2.0
    return DensityMatrix(params.space, m, trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)
