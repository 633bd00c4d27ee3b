"""Switched-coupling trajectories, quasi-static drives, and their bookkeeping."""

import numpy as np
import pytest

from landauer import (
    InteractionSpec,
    ReservoirSpec,
    adiabatic_sweep,
    composite_simpson,
    erasure_protocol,
    evolve_adiabatic,
    evolve_instantaneous,
    heat_flux_observable,
    interpolation_protocol,
    propagator_convergence,
    propagator_timedep,
    random_protocol,
)
from landauer import qmat
from conftest import SIGMA_Z, site_coupling


def test_composite_simpson_exact_on_cubics():
    xs = np.linspace(0.0, 2.0, 5)
    values = xs ** 3 - 2.0 * xs ** 2 + 3.0
    want = 2.0 ** 4 / 4 - 2.0 * 2.0 ** 3 / 3 + 3.0 * 2.0
    assert composite_simpson(values, xs[1] - xs[0]) == pytest.approx(want, abs=1e-14)


def test_composite_simpson_rejects_odd_interval_counts():
    with pytest.raises(ValueError):
        composite_simpson(np.ones(4), 0.1)  # 3 intervals
    with pytest.raises(ValueError):
        composite_simpson(np.ones(2), 0.1)  # 1 interval


def test_heat_flux_observable_vanishes_without_coupling():
    rng = np.random.default_rng(80)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    uncoupled = qmat.tensor(qmat.random_hermitian(2, rng), np.eye(2))
    assert qmat.max_abs(heat_flux_observable(uncoupled, r)) <= 1e-14
    coupled = uncoupled + 0.3 * site_coupling(2)
    phi = heat_flux_observable(coupled, r)
    np.testing.assert_allclose(phi, phi.conj().T, atol=1e-14)
    with pytest.raises(ValueError):
        heat_flux_observable(np.zeros((3, 3)), r)


def test_instantaneous_heat_agrees_three_ways():
    rng = np.random.default_rng(81)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    spec = InteractionSpec(h_s=0.5 * SIGMA_Z, v=site_coupling(2), lam=0.3)
    trajectory = evolve_instantaneous(
        np.eye(2) / 2, r, spec, np.linspace(0.0, 4.0, 17), flux_dt=0.005)
    assert trajectory.max_bookkeeping_mismatch <= 1e-12
    assert trajectory.max_flux_mismatch <= 1e-8
    for step in trajectory.steps:
        assert step.ledger.sigma >= -1e-12
        assert step.energy_drift <= 1e-12
        assert step.spectrum_drift <= 1e-10
    assert trajectory.final.t == pytest.approx(4.0)


def test_instantaneous_input_validation():
    rng = np.random.default_rng(82)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    spec = InteractionSpec(h_s=0.5 * SIGMA_Z, v=site_coupling(2), lam=0.3)
    with pytest.raises(ValueError):
        evolve_instantaneous(np.eye(2) / 2, r, spec, [0.5, 0.25])
    with pytest.raises(ValueError):
        evolve_instantaneous(np.eye(2) / 2, r, spec, [-1.0, 1.0])
    with pytest.raises(ValueError):
        evolve_instantaneous(np.eye(3) / 3, r, spec, [1.0])


def test_propagator_is_unitary():
    rng = np.random.default_rng(83)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    protocol = random_protocol(4, rng, scale=0.6)
    u = propagator_timedep(protocol, r, 2.0, 100)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(4), atol=1e-12)
    with pytest.raises(ValueError):
        propagator_timedep(protocol, r, 2.0, 1)
    with pytest.raises(ValueError):
        propagator_timedep(protocol, r, 0.0, 100)


def test_propagator_step_halving_shows_second_order():
    rng = np.random.default_rng(84)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    protocol = random_protocol(4, rng, scale=0.6)
    report = propagator_convergence(protocol, r, 2.0, 64)
    assert 3.0 <= report.ratio <= 5.0
    assert not report.warning
    assert report.order_estimate == pytest.approx(2.0, abs=0.4)


def test_adiabatic_requires_matching_start_hamiltonian():
    rng = np.random.default_rng(85)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    # K(0) = 0 does not pin rho_i = diag(0.6, 0.4) as its Gibbs state
    protocol = interpolation_protocol(
        np.zeros((2, 2)), SIGMA_Z, 2, v=site_coupling(2), lam=0.5)
    with pytest.raises(ValueError):
        evolve_adiabatic(protocol, r, np.diag([0.6, 0.4]), 4.0, 100)


def test_adiabatic_run_closes_the_energy_books():
    rng = np.random.default_rng(86)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    protocol = erasure_protocol(
        np.eye(2) / 2, np.diag([0.75, 0.25]), r.beta, 2,
        v=site_coupling(2), lam=0.6)
    result = evolve_adiabatic(protocol, r, np.eye(2) / 2, 5.0, 601)
    assert result.steps == 602  # odd counts are rounded up for Simpson
    assert result.first_law_residual <= 1e-4
    assert result.ledger.sigma >= 0.0
    assert result.spectrum_drift <= 1e-10
    assert result.rho_final.shape == (2, 2)


def test_adiabatic_sweep_mechanics_on_a_small_grid():
    rng = np.random.default_rng(87)
    r = ReservoirSpec(h_r=qmat.random_hermitian(2, rng), beta=1.0)
    protocol = erasure_protocol(
        np.eye(2) / 2, np.diag([0.75, 0.25]), r.beta, 2,
        v=site_coupling(2), lam=0.6)
    sweep = adiabatic_sweep(protocol, r, np.eye(2) / 2, [3.0, 6.0], steps=600, panels=8)
    assert sweep.horizons == [3.0, 6.0]
    assert all(s > 0 for s in sweep.sigmas)
    # erasure boundaries pin Gibbs states at both ends, so the endpoint
    # partition functions match and the quasi-static prediction vanishes
    assert abs(sweep.gibbs_prediction) <= 1e-9
    with pytest.raises(ValueError):
        adiabatic_sweep(protocol, r, np.eye(2) / 2, [6.0, 3.0], steps=100)
