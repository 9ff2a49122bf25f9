"""Truncated Fock space: ladder operators, number operator, and the state
constructors used as initial conditions.

The space keeps levels |0> .. |dim-1>.  Operators are plain (dim, dim)
complex arrays.  Truncation is never silent: constructors that would cut
off more probability mass than the adequacy gates allow raise
TruncationError instead of renormalizing the problem away.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .tolerances import DEFAULT as TOL


class TruncationError(ValueError):
    """The requested state does not fit the truncated space."""


@dataclass(frozen=True)
class FockSpace:
    dim: int

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"need dim >= 2, got {self.dim}")


def annihilation(space):
    """Lowering operator: a[n-1, n] = sqrt(n), zero elsewhere."""
    return np.diag(np.sqrt(np.arange(1, space.dim)),
                   1).astype(np.complex128)


def creation(space):
    """Raising operator, the adjoint of annihilation."""
    return linalg.dag(annihilation(space))


def number(space):
    """N = diag(0, 1, ..., dim-1); equals creation @ annihilation."""
    return np.diag(np.arange(space.dim)).astype(np.complex128)


class StateVector:
    """Normalized pure state.

    `deficit` is a construction receipt: the probability mass of the ideal
    (untruncated) state that the truncation cut off.  Constructors always
    renormalize, so the receipt is the only trace of the cut.
    """

    __slots__ = ("space", "amplitudes", "deficit")

    def __init__(self, space, amplitudes, deficit=0.0):
        amps = np.asarray(amplitudes,
                          dtype=np.complex128).reshape(-1).copy()
        if amps.size != space.dim:
            raise ValueError(
                f"expected {space.dim} amplitudes, got {amps.size}")
        nrm = np.linalg.norm(amps)
        if abs(nrm - 1.0) > TOL.state_norm:
            raise ValueError(f"state not normalized: ||psi||_2 = {nrm!r}")
        self.space = space
        self.amplitudes = amps
        self.deficit = float(deficit)


def fock_state(space, n):
    """Number state |n>."""
    if not 0 <= n < space.dim:
        raise ValueError(f"level {n} outside 0..{space.dim - 1}")
    amps = np.zeros(space.dim, dtype=np.complex128)
    amps[n] = 1.0
    return StateVector(space, amps)


def coherent_tail(space, alpha):
    """Poisson mass of the ideal |alpha> above the top kept level.

    The occupation of level n is e^{-|alpha|^2} |alpha|^{2n} / n!; the sum
    over n >= dim is walked forward from its first term.
    """
    lam = abs(complex(alpha)) ** 2
    if lam == 0.0:
        return 0.0
    d = space.dim
    term = math.exp(-lam + d * math.log(lam) - math.lgamma(d + 1))
    total = 0.0
    for n in range(d, d + 4000):
        total += term
        term *= lam / (n + 1)
        if term < total * 1e-18 + 1e-300:
            break
    return total


def coherent_state(space, alpha):
    """Coherent state by its number-basis series.

    c_n proportional to alpha^n / sqrt(n!), renormalized after truncation.
    Fails when the cut mass would exceed the adequacy gate.
    """
    alpha = complex(alpha)
    tail = coherent_tail(space, alpha)
    if tail > TOL.coherent_tail:
        raise TruncationError(
            f"coherent state alpha={alpha} leaves {tail:.3e} of its mass "
            f"above level {space.dim - 1}")
    d = space.dim
    amps = np.empty(d, dtype=np.complex128)
    amps[0] = 1.0
    for n in range(1, d):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    amps *= math.exp(-abs(alpha) ** 2 / 2.0)
    nrm = np.linalg.norm(amps)
    return StateVector(space, amps / nrm, deficit=1.0 - nrm * nrm)


def coherent_state_via_displacement(space, alpha):
    """Coherent state as expm(alpha a^dag - conj(alpha) a) |0>.

    The truncated displacement is exactly unitary (exponential of an
    anti-Hermitian matrix), so nothing is renormalized away; the receipt
    still reports the ideal state's tail mass beyond the truncation.
    """
    alpha = complex(alpha)
    tail = coherent_tail(space, alpha)
    if tail > TOL.coherent_tail:
        raise TruncationError(
            f"coherent state alpha={alpha} leaves {tail:.3e} of its mass "
            f"above level {space.dim - 1}")
    gen = alpha * creation(space) - np.conj(alpha) * annihilation(space)
    amps = linalg.expm(gen)[:, 0]
    amps = amps / np.linalg.norm(amps)
    return StateVector(space, amps, deficit=tail)


def squeezed_tail(space, beta):
    """Mass of the ideal squeezed vacuum at levels >= dim.

    Only even levels are occupied: |c_2n|^2 = tanh(r)^{2n} (2n)! /
    (4^n (n!)^2 cosh r) with r = |beta|.
    """
    r = abs(complex(beta))
    if r == 0.0:
        return 0.0
    th2 = math.tanh(r) ** 2
    n0 = (space.dim + 1) // 2  # first n with 2n >= dim
    term = 1.0 / math.cosh(r)
    total = 0.0
    n = 0
    while n < n0 + 200000:
        if n >= n0:
            total += term
            if term < total * 1e-18 + 1e-300:
                break
        term *= th2 * (2 * n + 1) / (2 * n + 2)
        n += 1
    return total


def squeezed_state(space, beta):
    """Squeezed vacuum expm((beta (a^dag)^2 - conj(beta) a^2) / 2) |0>.

    Unitary on the truncated space, so the receipt reports the ideal
    state's tail mass, as for the displacement route.
    """
    beta = complex(beta)
    tail = squeezed_tail(space, beta)
    if tail > TOL.squeezed_tail:
        raise TruncationError(
            f"squeezed state beta={beta} leaves {tail:.3e} of its mass "
            f"above level {space.dim - 1}")
    adg = creation(space)
    a = annihilation(space)
    gen = (beta * adg @ adg - np.conj(beta) * a @ a) / 2.0
    amps = linalg.expm(gen)[:, 0]
    amps = amps / np.linalg.norm(amps)
    return StateVector(space, amps, deficit=tail)


class DensityMatrix:
    """Hermitian unit-trace matrix with a non-negative spectrum.

    Validation runs at construction.  The tolerances are parameters:
    freshly built pure states are clean at the 1e-9 scale, while evolved
    states legitimately carry integration drift at the 1e-7 scale, and the
    caller knows which regime it is in.  trace_drift and min_eig are kept
    as receipts of the validation.
    """

    __slots__ = ("space", "matrix", "trace_drift", "min_eig")

    def __init__(self, space, matrix, herm_tol=TOL.dm_herm,
                 trace_tol=TOL.dm_trace, eig_floor=TOL.dm_min_eig):
        m = np.asarray(matrix, dtype=np.complex128)
        if m.shape != (space.dim, space.dim):
            raise ValueError(
                f"expected shape {(space.dim, space.dim)}, got {m.shape}")
        defect = float(np.max(np.abs(m - m.conj().T)))
        if defect > herm_tol:
            raise ValueError(
                f"not Hermitian: defect {defect:.3e} > {herm_tol:.1e}")
        drift = abs(complex(np.trace(m)) - 1.0)
        if drift > trace_tol:
            raise ValueError(
                f"trace off unity by {drift:.3e} > {trace_tol:.1e}")
        w = linalg.hermitian_eigenvalues((m + m.conj().T) / 2.0)
        if w[0] < eig_floor:
            raise ValueError(
                f"spectrum dips to {w[0]:.3e}, below {eig_floor:.1e}")
        self.space = space
        self.matrix = m.copy()
        self.trace_drift = float(drift)
        self.min_eig = float(w[0])


def density_from_pure(psi):
    """Rank-one projector |psi><psi|."""
    outer = np.outer(psi.amplitudes, psi.amplitudes.conj())
    return DensityMatrix(psi.space, outer)
