"""The model layer: right-hand side, Liouvillian assembly, propagators.

These are the brute-force oracles the closed forms get judged against, so
they are tested here only against hand results, conservation laws, and
each other, never against the analytic module.
"""

import math

import numpy as np
import pytest

from qdho import fock, linalg, lindblad


def make_params(omega=1.0, mu=0.4, nu=0.1, dim=20):
    return lindblad.ModelParams(omega, mu, nu, fock.FockSpace(dim))


def random_hermitian(rng, d):
    x = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (x + x.conj().T) / 2.0


def coherent_rho(dim, alpha=1.0):
    return fock.density_from_pure(
        fock.coherent_state(fock.FockSpace(dim), alpha))


# ---------------------------------------------------------------------------
# parameter validation

def test_rejects_mu_not_greater_than_nu():
    with pytest.raises(ValueError):
        make_params(mu=0.1, nu=0.4)
    with pytest.raises(ValueError):
        make_params(mu=0.3, nu=0.3)
    with pytest.raises(ValueError):
        make_params(mu=0.3, nu=-0.1)


def test_nu_zero_is_allowed():
    p = make_params(mu=0.5, nu=0.0)
    assert p.nu == 0.0


# ---------------------------------------------------------------------------
# master_rhs

def test_vacuum_stationary_when_nu_zero():
    params = make_params(mu=0.5, nu=0.0, dim=8)
    rho0 = fock.density_from_pure(fock.fock_state(params.space, 0))
    out = lindblad.master_rhs(params, rho0)
    assert np.max(np.abs(out)) <= 1e-15


def test_rhs_traceless_on_interior_support():
    rng = np.random.default_rng(60)
    params = make_params(dim=10)
    rho = np.zeros((10, 10), dtype=complex)
    rho[:8, :8] = random_hermitian(rng, 8)  # support on levels 0..D-3
    out = lindblad.master_rhs(params, rho)
    assert abs(np.trace(out)) <= 1e-10


def test_rhs_matches_liouvillian_route():
    rng = np.random.default_rng(61)
    params = make_params(dim=9)
    liou = lindblad.build_liouvillian(params)
    rho = random_hermitian(rng, 9)
    direct = lindblad.master_rhs(params, rho)
    via_vec = linalg.devectorize(liou.matrix @ linalg.vectorize(rho), 9, 9)
    assert np.max(np.abs(direct - via_vec)) <= 1e-10


def test_rhs_preserves_hermiticity():
    rng = np.random.default_rng(62)
    params = make_params(dim=8)
    rho = random_hermitian(rng, 8)
    out = lindblad.master_rhs(params, rho)
    assert np.max(np.abs(out - out.conj().T)) <= 1e-12


# ---------------------------------------------------------------------------
# Liouvillian assembly

def test_liouvillian_equals_k_assembly():
    params = make_params(omega=0.7, mu=0.9, nu=0.2, dim=7)
    sp = params.space
    direct = lindblad.build_liouvillian(params).matrix
    eye2 = np.eye(49)
    via_k = (-1j * params.omega * lindblad.k0(sp)
             + params.nu * lindblad.k_plus(sp)
             + params.mu * lindblad.k_minus(sp)
             - (params.mu + params.nu) * lindblad.k3(sp)
             + 0.5 * (params.mu - params.nu) * eye2)
    assert np.max(np.abs(direct - via_k)) <= 1e-14


def test_liouvillian_norm_scales_with_mu():
    params = make_params(omega=0.0, mu=1e-6, nu=0.0, dim=12)
    norm = linalg.frobenius_norm(lindblad.build_liouvillian(params).matrix)
    assert 1e-7 <= norm <= 1e-5 * 12


def test_liouvillian_kills_vacuum_when_undriven():
    params = make_params(omega=0.0, mu=0.5, nu=0.0, dim=6)
    liou = lindblad.build_liouvillian(params)
    rho0 = np.zeros((6, 6), dtype=complex)
    rho0[0, 0] = 1.0
    out = liou.matrix @ linalg.vectorize(rho0)
    assert np.max(np.abs(out)) == 0.0


def test_liouvillian_maps_hermitian_to_hermitian():
    rng = np.random.default_rng(63)
    params = make_params(dim=8)
    liou = lindblad.build_liouvillian(params)
    rho = random_hermitian(rng, 8)
    out = linalg.devectorize(liou.matrix @ linalg.vectorize(rho), 8, 8)
    assert np.max(np.abs(out - out.conj().T)) <= 1e-10


# ---------------------------------------------------------------------------
# su(1,1) structure of the K generators

def _interior(d):
    idx = np.array([i * d + j for i in range(d - 1) for j in range(d - 1)])
    return np.ix_(idx, idx)


def test_k_commutators_interior():
    sp = fock.FockSpace(12)
    kp, km, k3m = lindblad.k_plus(sp), lindblad.k_minus(sp), lindblad.k3(sp)
    sub = _interior(12)
    assert np.max(np.abs((k3m @ kp - kp @ k3m - kp)[sub])) <= 1e-10
    assert np.max(np.abs((k3m @ km - km @ k3m + km)[sub])) <= 1e-10
    assert np.max(np.abs((kp @ km - km @ kp + 2.0 * k3m)[sub])) <= 1e-10


def test_k0_commutes_interior():
    sp = fock.FockSpace(12)
    k0m = lindblad.k0(sp)
    sub = _interior(12)
    for other in (lindblad.k_plus(sp), lindblad.k3(sp), lindblad.k_minus(sp)):
        assert np.max(np.abs((k0m @ other - other @ k0m)[sub])) <= 1e-10


# ---------------------------------------------------------------------------
# propagators

def test_propagate_expm_t_zero():
    params = make_params()
    rho0 = coherent_rho(20)
    out = lindblad.propagate_expm(params, rho0, 0.0)
    assert np.array_equal(out.matrix, rho0.matrix)


def test_propagate_rk4_t_zero():
    params = make_params()
    rho0 = coherent_rho(20)
    out = lindblad.propagate_rk4(params, rho0, 0.0)
    assert np.array_equal(out.matrix, rho0.matrix)


def test_expm_trace_preservation():
    params = make_params()
    rho0 = coherent_rho(20)
    out = lindblad.propagate_expm(params, rho0, 2.0)
    assert abs(np.trace(out.matrix).real - 1.0) <= 1e-8
    assert out.trace_drift <= 1e-8


def test_expm_hermiticity_before_symmetrize():
    # rerun the vectorized flow by hand to see the raw drift the propagator
    # symmetrizes away
    params = make_params()
    rho0 = coherent_rho(20)
    liou = lindblad.build_liouvillian(params)
    raw = linalg.devectorize(
        linalg.expm(2.0 * liou.matrix) @ linalg.vectorize(rho0.matrix),
        20, 20)
    assert np.max(np.abs(raw - raw.conj().T)) <= 1e-9


def test_expm_matches_rk4():
    params = make_params()
    rho0 = coherent_rho(20)
    a = lindblad.propagate_expm(params, rho0, 2.0)
    b = lindblad.propagate_rk4(params, rho0, 2.0)
    assert np.linalg.norm(a.matrix - b.matrix) <= 1e-7


def test_rk4_fourth_order_convergence():
    params = make_params(omega=1.0, mu=0.5, nu=0.1, dim=12)
    rho0 = coherent_rho(12, alpha=0.5)  # alpha=1 would trip the gate here
    ref = lindblad.propagate_expm(params, rho0, 1.0).matrix
    errs = []
    for dt in (0.05, 0.025, 0.0125):
        out = lindblad.propagate_rk4(params, rho0, 1.0, dt=dt).matrix
        errs.append(np.linalg.norm(out - ref))
    for coarse, fine in zip(errs, errs[1:]):
        assert 10.0 <= coarse / fine <= 24.0, errs


def test_rk4_two_level_closed_form():
    # nu=0, rho0=|1><1|: populations relax as e^{-mu t}
    params = make_params(mu=0.7, nu=0.0, dim=6)
    rho0 = fock.density_from_pure(fock.fock_state(params.space, 1))
    for t in (0.5, 1.5):
        out = lindblad.propagate_rk4(params, rho0, t).matrix
        p1 = math.exp(-params.mu * t)
        assert abs(out[1, 1].real - p1) <= 1e-8
        assert abs(out[0, 0].real - (1.0 - p1)) <= 1e-8


def test_positivity_on_standard_scenario():
    params = make_params()
    rho0 = coherent_rho(20)
    for t in (0.5, 2.0, 5.0):
        out = lindblad.propagate_expm(params, rho0, t)
        assert out.min_eig >= -1e-7


def test_rk4_dt_validation():
    params = make_params()
    rho0 = coherent_rho(20)
    with pytest.raises(ValueError):
        lindblad.propagate_rk4(params, rho0, 1.0, dt=0.0)
    with pytest.raises(ValueError):
        lindblad.propagate_rk4(params, rho0, 1.0, dt=2.0)


def test_rk4_partial_final_step_lands_on_t():
    # dt that does not divide t; the tail step must close the gap, so the
    # result sits at rho(1.0), not at rho(0.9) where the whole steps stop
    params = make_params(dim=10)
    rho0 = coherent_rho(10, alpha=0.5)
    a = lindblad.propagate_rk4(params, rho0, 1.0, dt=0.3).matrix
    at_t = lindblad.propagate_expm(params, rho0, 1.0).matrix
    short = lindblad.propagate_expm(params, rho0, 0.9).matrix
    assert np.linalg.norm(a - at_t) <= 2e-3
    assert np.linalg.norm(short - at_t) > 5e-2  # the gap being closed


def test_negative_t_rejected():
    params = make_params()
    rho0 = coherent_rho(20)
    with pytest.raises(ValueError):
        lindblad.propagate_expm(params, rho0, -0.5)
    with pytest.raises(ValueError):
        lindblad.propagate_rk4(params, rho0, -0.5)
