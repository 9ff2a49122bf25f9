"""Closed-form machinery for the damped oscillator.

The flow of the vectorized master equation factors through a three
parameter family of scalars E(t), F(t), G(t).  Everything in this module
is driven by that triple: the 2x2 group layer where the factorization is
proved, the exact solution series for arbitrary initial states, the
specialized vacuum / coherent / undriven closed forms, and the scalar
operator identities used to cross-check the whole construction.

The independent numerical propagators live in `lindblad`; nothing here
calls them.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import fock, linalg, lindblad
from .fock import DensityMatrix, TruncationError
from .tolerances import DEFAULT as TOL


@dataclass(frozen=True)
class EFGCoefficients:
    """The scalar triple at a fixed time; (0, 1, 0) at t = 0."""

    t: float
    e_val: float
    f_val: float
    g_val: float


def efg(params, t):
    """E, F, G evaluated in overflow-safe form.

    With q = e^{-(mu-nu)t} the hyperbolic closed forms collapse to

        E = mu (1 - q) / (mu - nu q)
        F = e^{(mu-nu)t/2} (mu - nu q) / (mu - nu)
        G = nu (1 - q) / (mu - nu q)

    which avoids cosh/sinh cancellation at large t.  F grows like
    e^{(mu+nu)t/2}; when it no longer fits a float the call raises
    OverflowError rather than saturating.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    mu, nu = params.mu, params.nu
    gap = mu - nu
    q = math.exp(-gap * t)
    denom = mu - nu * q
    e_val = mu * (1.0 - q) / denom
    g_val = nu * (1.0 - q) / denom
    try:
        f_val = math.exp(0.5 * gap * t) * denom / gap
    except OverflowError:
        f_val = math.inf
    if not math.isfinite(f_val):
        raise OverflowError(f"F(t) overflows at t={t}")
    return EFGCoefficients(float(t), e_val, f_val, g_val)


def two_by_two_exponential(params, t):
    """expm(t [[-(mu+nu)/2, nu], [-mu, (mu+nu)/2]]) in closed form.

    The generator squares to ((mu-nu)t/2)^2 times the identity, so the
    exponential series splits into cosh and sinh parts.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    mu, nu = params.mu, params.nu
    gap = mu - nu
    x = 0.5 * gap * t
    ch = math.cosh(x)
    sh = math.sinh(x)
    r = (mu + nu) / gap
    return np.array(
        [[ch - r * sh, (2.0 * nu / gap) * sh],
         [-(2.0 * mu / gap) * sh, ch + r * sh]], dtype=np.complex128)


def gauss_decompose(m, det_tol=TOL.gauss_det, pivot_tol=TOL.gauss_pivot):
    """Unimodular 2x2 factorization upper-unitriangular x diagonal x lower.

    [[a, b], [c, d]] = [[1, b/d], [0, 1]] diag(1/d, d) [[1, 0], [c/d, 1]],
    valid when ad - bc = 1 and d != 0.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.shape != (2, 2):
        raise ValueError(f"need a 2x2 matrix, got {m.shape}")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det - 1.0) > det_tol:
        raise ValueError(f"determinant {det} is not 1 within {det_tol:.1e}")
    d = m[1, 1]
    if abs(d) < pivot_tol:
        raise ValueError("decomposition singular: lower-right entry is 0")
    upper = np.array([[1.0, m[0, 1] / d], [0.0, 1.0]], dtype=np.complex128)
    diag = np.array([[1.0 / d, 0.0], [0.0, d]], dtype=np.complex128)
    lower = np.array([[1.0, 0.0], [m[1, 0] / d, 1.0]], dtype=np.complex128)
    return upper, diag, lower


def riccati_residual(params, t, fd_step=None):
    """Residual of the coefficient ODE system under the ansatz
    f = G, g = -2 log F, h = E:

        f' + (mu+nu) f - mu f^2 = nu
        g' - 2 mu f + (mu+nu) = 0
        h' e^{-g} = mu

    Derivatives are central finite differences (step 1e-5 max(1, t)),
    deliberately independent of the closed-form derivatives.  Returns the
    max of the three absolute residuals.
    """
    if t <= 0:
        raise ValueError("t must be > 0")
    h = fd_step if fd_step is not None else 1e-5 * max(1.0, t)
    h = min(h, t / 2.0)  # keep the stencil inside t > 0
    mu, nu = params.mu, params.nu
    cm = efg(params, t - h)
    cp = efg(params, t + h)
    c0 = efg(params, t)
    f0 = c0.g_val
    g0 = -2.0 * math.log(c0.f_val)
    fdot = (cp.g_val - cm.g_val) / (2.0 * h)
    gdot = (-2.0 * math.log(cp.f_val) + 2.0 * math.log(cm.f_val)) / (2.0 * h)
    hdot = (cp.e_val - cm.e_val) / (2.0 * h)
    r1 = abs(fdot + (mu + nu) * f0 - mu * f0 * f0 - nu)
    r2 = abs(gdot - 2.0 * mu * f0 + (mu + nu))
    r3 = abs(hdot * math.exp(-g0) - mu)
    return max(r1, r2, r3)


def _lower_sandwich(x):
    """a X a^dag as an index shift: y[i, j] = sqrt((i+1)(j+1)) x[i+1, j+1]."""
    d = x.shape[0]
    y = np.zeros_like(x)
    s = np.sqrt(np.arange(1.0, d))
    y[:d - 1, :d - 1] = s[:, None] * s[None, :] * x[1:, 1:]
    return y


def _raise_sandwich(x):
    """a^dag X a: y[i, j] = sqrt(i j) x[i-1, j-1]."""
    d = x.shape[0]
    y = np.zeros_like(x)
    s = np.sqrt(np.arange(1.0, d))
    y[1:, 1:] = s[:, None] * s[None, :] * x[:d - 1, :d - 1]
    return y


def general_solution(params, rho0, t):
    """Closed-form rho(t) for an arbitrary initial state.

    Double series: the inner sum of E^m/m! a^m rho0 (a^dag)^m, a diagonal
    conjugation by exp((-i omega t - log F) N), the outer sum of G^n/n!
    raisings, then the prefactor e^{(mu-nu)t/2}/F, evaluated in its stable
    form 1 - G.  Both sums terminate at the truncation because a is
    nilpotent there.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return rho0
    c = efg(params, t)
    d = params.space.dim
    acc = rho0.matrix.astype(np.complex128).copy()
    term = rho0.matrix
    for m in range(1, d):
        term = _lower_sandwich(term) * (c.e_val / m)
        if not term.any():
            break
        acc += term
    gamma = -1j * params.omega * t - math.log(c.f_val)
    dvec = np.exp(gamma * np.arange(d))
    acc = dvec[:, None] * acc * dvec.conj()[None, :]
    out = acc.copy()
    term = acc
    for n in range(1, d):
        term = _raise_sandwich(term) * (c.g_val / n)
        if not term.any():
            break
        out += term
    m_t = (1.0 - c.g_val) * out
    m_t = (m_t + m_t.conj().T) / 2.0
    return DensityMatrix(params.space, m_t, trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)


def vacuum_solution(params, t):
    """Vacuum initial state: the diagonal geometric ladder (1-G) G^n.

    The exact trace is 1 - G^dim; when that deficit would blow the evolved
    trace budget the call fails loudly as a truncation problem.  At t = 0,
    and for nu = 0 at every t, G = 0 and the state is the vacuum projector
    itself.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    d = params.space.dim
    if t == 0 or params.nu == 0.0:
        m = np.zeros((d, d), dtype=np.complex128)
        m[0, 0] = 1.0
        return DensityMatrix(params.space, m)
    g = efg(params, t).g_val
    deficit = g ** d
    if deficit > TOL.evolved_trace:
        raise TruncationError(
            f"vacuum solution trace deficit G^dim = {deficit:.3e}; "
            "the truncation is too small for these rates")
    w = (1.0 - g) * g ** np.arange(d)
    return DensityMatrix(params.space, np.diag(w.astype(np.complex128)),
                         trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)


def coherent_solution(params, alpha, t):
    """Coherent initial state |alpha><alpha| in closed form.

    Scalar prefactor exp(|alpha|^2 e^{-(mu-nu)t} log G + log(1-G)) times
    expm(-log G (c a^dag + conj(c) a - N)) with the spiraling amplitude
    c = alpha e^{-((mu-nu)/2 + i omega) t}.  The prefactor degenerates for
    nu = 0 (log 0), where the undriven closed form applies instead; that
    case is routed to nu_zero_solution.
    """
    alpha = complex(alpha)
    space = params.space
    if params.nu == 0.0:
        rho0 = fock.density_from_pure(fock.coherent_state(space, alpha))
        return nu_zero_solution(params, rho0, t)
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return fock.density_from_pure(fock.coherent_state(space, alpha))
    tail = fock.coherent_tail(space, alpha)
    if tail > TOL.coherent_tail:
        raise TruncationError(
            f"coherent state alpha={alpha} leaves {tail:.3e} of its mass "
            f"above level {space.dim - 1}")
    c = efg(params, t)
    lng = math.log(c.g_val)
    gap = params.mu - params.nu
    spiral = alpha * cmath.exp(-(0.5 * gap + 1j * params.omega) * t)
    gen = -lng * (spiral * fock.creation(space)
                  + spiral.conjugate() * fock.annihilation(space)
                  - fock.number(space))
    pref = math.exp(abs(alpha) ** 2 * math.exp(-gap * t) * lng
                    + math.log1p(-c.g_val))
    m = pref * linalg.expm(gen)
    m = (m + m.conj().T) / 2.0
    return DensityMatrix(space, m, trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)


def nu_zero_solution(params, rho0, t):
    """Closed form for nu = 0 (pure decay, no feeding from below):

    e^{-(mu/2 + i omega) t N}
      { sum_m (1 - e^{-mu t})^m / m!  a^m rho0 (a^dag)^m }
    e^{-(mu/2 - i omega) t N}
    """
    if params.nu != 0.0:
        raise ValueError("this closed form requires nu == 0")
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return rho0
    d = params.space.dim
    e0 = -math.expm1(-params.mu * t)  # 1 - e^{-mu t}
    acc = rho0.matrix.astype(np.complex128).copy()
    term = rho0.matrix
    for m in range(1, d):
        term = _lower_sandwich(term) * (e0 / m)
        if not term.any():
            break
        acc += term
    gamma = -(0.5 * params.mu + 1j * params.omega) * t
    dvec = np.exp(gamma * np.arange(d))
    m_t = dvec[:, None] * acc * dvec.conj()[None, :]
    m_t = (m_t + m_t.conj().T) / 2.0
    return DensityMatrix(params.space, m_t, trace_tol=TOL.evolved_trace,
                         eig_floor=TOL.evolved_min_eig)


def _block_discrepancy(lhs, rhs, keep):
    delta = lhs[:keep, :keep] - rhs[:keep, :keep]
    ref = np.linalg.norm(lhs[:keep, :keep])
    return float(np.linalg.norm(delta) / max(1.0, ref))


def disentangle_check(alpha, beta, gamma, space):
    """Discrepancy of the scalar disentangling identities.

    Both sides of

        e^{alpha a^dag + beta a + gamma N}
          = e^{alpha beta (e^gamma - 1 - gamma) / gamma^2}
            e^{alpha (e^gamma - 1)/gamma a^dag}  e^{gamma N}
            e^{beta (e^gamma - 1)/gamma a}

    are built by dense exponentials, and likewise the inverse form

        e^{u a^dag} e^{v N} e^{w a}
          = e^{-u w (e^v - 1 - v) / (e^v - 1)^2}
            e^{u v/(e^v - 1) a^dag + v w/(e^v - 1) a + v N}

    at (u, v, w) = (alpha, gamma, beta).  Returns the larger of the two
    relative Frobenius discrepancies over the interior block (the top
    quarter of levels is dropped: the truncated [a, a^dag] differs from 1
    there and pollutes the products).
    """
    alpha = complex(alpha)
    beta = complex(beta)
    gamma = complex(gamma)
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    eg = cmath.exp(gamma)
    if abs(eg - 1.0) < 1e-12:
        raise ValueError("e^gamma too close to 1: inverse form singular")
    worst = max(abs(alpha), abs(beta))
    tail = fock.coherent_tail(space, worst)
    if tail > TOL.coherent_tail:
        raise TruncationError(
            f"coefficients of size {worst} overflow the truncation "
            f"(tail {tail:.3e})")
    a = fock.annihilation(space)
    adg = fock.creation(space)
    nmat = fock.number(space)
    keep = space.dim - max(2, space.dim // 4)
    lhs1 = linalg.expm(alpha * adg + beta * a + gamma * nmat)
    scal1 = cmath.exp(alpha * beta * (eg - 1.0 - gamma) / gamma ** 2)
    rhs1 = scal1 * (linalg.expm(alpha * (eg - 1.0) / gamma * adg)
                    @ linalg.expm(gamma * nmat)
                    @ linalg.expm(beta * (eg - 1.0) / gamma * a))
    d1 = _block_discrepancy(lhs1, rhs1, keep)
    u, v, w = alpha, gamma, beta
    lhs2 = (linalg.expm(u * adg) @ linalg.expm(v * nmat)
            @ linalg.expm(w * a))
    scal2 = cmath.exp(-u * w * (eg - 1.0 - v) / (eg - 1.0) ** 2)
    rhs2 = scal2 * linalg.expm(u * v / (eg - 1.0) * adg
                               + v * w / (eg - 1.0) * a + v * nmat)
    d2 = _block_discrepancy(lhs2, rhs2, keep)
    return max(d1, d2)


def shuffle_check(s, t, space):
    """Discrepancy of the reordering identity
    e^{s a} e^{t a^dag} = e^{s t} e^{t a^dag} e^{s a}
    over the interior block (same margin as disentangle_check)."""
    s = complex(s)
    t = complex(t)
    a = fock.annihilation(space)
    adg = fock.creation(space)
    keep = space.dim - max(2, space.dim // 4)
    lhs = linalg.expm(s * a) @ linalg.expm(t * adg)
    rhs = cmath.exp(s * t) * (linalg.expm(t * adg) @ linalg.expm(s * a))
    return _block_discrepancy(lhs, rhs, keep)


def superop_disentangle_check(params, t):
    """Discrepancy of the factored flow on the doubled space:

        expm(t (nu K+ + mu K- - (mu+nu) K3))
          vs expm(G K+) expm(-2 log F K3) expm(E K-)

    compared on the interior block of params.space (rows and columns whose
    two tensor indices both stay below dim-1), relative Frobenius.

    Both sides are evaluated on a working truncation of 3*dim levels and
    then restricted to the interior block.  The factored side is unchanged
    by this (its lower-then-diagonal-then-raise paths never pass above the
    block), but the single exponential needs the headroom: cut at dim it
    loses the up-and-back paths through the removed levels, and that error
    reaches several levels into the interior (measured 1.1e-1 at dim=12,
    mu=2, nu=1, t=1; with the 3*dim working space it drops to ~1e-12).
    """
    d = params.space.dim
    work = fock.FockSpace(3 * d)
    c = efg(params, t)
    kp = lindblad.k_plus(work)
    km = lindblad.k_minus(work)
    k3m = lindblad.k3(work)
    lhs = linalg.expm(t * (params.nu * kp + params.mu * km
                           - (params.mu + params.nu) * k3m))
    rhs = (linalg.expm(c.g_val * kp)
           @ linalg.expm(-2.0 * math.log(c.f_val) * k3m)
           @ linalg.expm(c.e_val * km))
    w = work.dim
    interior = np.array([i * w + j for i in range(d - 1)
                         for j in range(d - 1)])
    sub = np.ix_(interior, interior)
    delta = lhs[sub] - rhs[sub]
    ref = np.linalg.norm(lhs[sub])
    return float(np.linalg.norm(delta) / max(1.0, ref))


@dataclass(frozen=True)
class ClassicalParams:
    """Underdamped classical oscillator: omega > gamma/2."""

    omega: float
    gamma: float
    alpha: complex

    def __post_init__(self):
        if not self.omega > self.gamma / 2.0:
            raise ValueError(
                f"underdamped regime requires omega > gamma/2, got "
                f"omega={self.omega}, gamma={self.gamma}")


def classical_trajectory(cp, t):
    """x(t) = alpha e^{-(gamma/2 + i Omega) t} + c.c. with
    Omega = sqrt(omega^2 - (gamma/2)^2).  Real by construction; accepts a
    scalar or an array of times."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    big = math.sqrt(cp.omega ** 2 - 0.25 * cp.gamma ** 2)
    val = 2.0 * np.real(complex(cp.alpha)
                        * np.exp(-(0.5 * cp.gamma + 1j * big) * t_arr))
    return float(val) if val.ndim == 0 else val


def classical_trajectory_approx(cp, t):
    """Same envelope with the shifted frequency replaced by omega itself,
    the small-gamma approximation."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    val = 2.0 * np.real(complex(cp.alpha)
                        * np.exp(-(0.5 * cp.gamma + 1j * cp.omega) * t_arr))
    return float(val) if val.ndim == 0 else val
