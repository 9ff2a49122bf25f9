"""Diagnostics record: values on known states, reference distances."""

import numpy as np
import pytest

from qdho import analytic, fock, lindblad, observables


def test_vacuum_record():
    rho = fock.density_from_pure(fock.fock_state(fock.FockSpace(8), 0))
    rec = observables.observe(rho)
    assert rec.t == 0.0
    assert rec.trace_drift <= 1e-12
    assert abs(rec.purity - 1.0) <= 1e-12
    assert rec.mean_n == 0.0
    assert rec.mean_a == 0.0
    assert rec.min_eig >= -1e-12
    assert rec.frob_dist_to_reference is None


def test_coherent_record_matches_alpha():
    alpha = 0.7 + 0.2j
    rho = fock.density_from_pure(
        fock.coherent_state(fock.FockSpace(30), alpha))
    rec = observables.observe(rho)
    assert abs(rec.mean_n - abs(alpha) ** 2) <= 1e-9
    assert abs(rec.mean_a - alpha) <= 1e-9
    assert abs(rec.purity - 1.0) <= 1e-9


def test_thermal_record():
    # diag (1-q) q^n has purity (1-q)/(1+q) and <N> = q/(1-q)
    q = 0.25
    space = fock.FockSpace(40)
    weights = (1.0 - q) * q ** np.arange(40)
    rho = fock.DensityMatrix(space, np.diag(weights).astype(np.complex128))
    rec = observables.observe(rho)
    assert abs(rec.purity - 0.6) <= 1e-9
    assert abs(rec.mean_n - 1.0 / 3.0) <= 1e-9
    assert rec.mean_a == 0.0
    assert rec.min_eig >= 0.0


def test_purity_decreases_from_vacuum():
    params = lindblad.ModelParams(1.0, 2.0, 1.0, fock.FockSpace(30))
    purities = []
    for t in (0.25, 0.5, 1.0, 1.5, 2.0):
        rho = analytic.vacuum_solution(params, t)
        rec = observables.observe(rho, t=t)
        g = analytic.efg(params, t).g_val
        assert abs(rec.purity - (1.0 - g) / (1.0 + g)) <= 1e-9
        purities.append(rec.purity)
    assert all(a > b for a, b in zip(purities, purities[1:]))


def test_time_stamp_carried_through():
    rho = fock.density_from_pure(fock.fock_state(fock.FockSpace(6), 1))
    assert observables.observe(rho, t=2.5).t == 2.5


def test_reference_distance():
    space = fock.FockSpace(12)
    a = fock.density_from_pure(fock.fock_state(space, 0))
    b = fock.density_from_pure(fock.fock_state(space, 1))
    rec = observables.observe(a, reference=b)
    # two orthogonal projectors sit at Frobenius distance sqrt(2)
    assert abs(rec.frob_dist_to_reference - np.sqrt(2.0)) <= 1e-12
    assert observables.observe(a, reference=a).frob_dist_to_reference == 0.0


def test_reference_space_mismatch():
    a = fock.density_from_pure(fock.fock_state(fock.FockSpace(12), 0))
    b = fock.density_from_pure(fock.fock_state(fock.FockSpace(10), 0))
    with pytest.raises(ValueError):
        observables.observe(a, reference=b)


def test_record_rejects_bad_purity():
    with pytest.raises(ValueError):
        observables.ObservableRecord(
            t=0.0, trace_re=1.0, trace_drift=0.0, purity=1.2,
            mean_n=0.0, mean_a=0.0, min_eig=0.0)
    with pytest.raises(ValueError):
        observables.ObservableRecord(
            t=0.0, trace_re=1.0, trace_drift=0.0, purity=0.0,
            mean_n=0.0, mean_a=0.0, min_eig=0.0)


def test_record_rejects_negative_occupation():
    with pytest.raises(ValueError):
        observables.ObservableRecord(
            t=0.0, trace_re=1.0, trace_drift=0.0, purity=1.0,
            mean_n=-1.0, mean_a=0.0, min_eig=0.0)


def test_mean_a_spiral_on_evolved_state():
    params = lindblad.ModelParams(1.0, 0.4, 0.1, fock.FockSpace(30))
    t = 1.2
    rho = analytic.coherent_solution(params, 1.0, t)
    rec = observables.observe(rho, t=t)
    target = np.exp(-(0.15 + 1.0j) * t)
    assert abs(rec.mean_a - target) <= 1e-6
