"""Shared fixtures: the expensive physics runs happen once per session."""

import numpy as np
import pytest

from landauer import (
    InteractionSpec,
    ReservoirSpec,
    adiabatic_sweep,
    apply_process,
    erasure_protocol,
    evolve_instantaneous,
    haar_unitary,
    random_hermitian,
    tensor,
)
from landauer.harness import build_reservoir, parse_config

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def site_coupling(dim_r: int) -> np.ndarray:
    """System sx coupled to sx on the first reservoir qubit."""
    return tensor(SIGMA_X, np.kron(SIGMA_X, np.eye(dim_r // 2)))


@pytest.fixture(scope="session")
def battery():
    """500 seeded erasure processes: d_S in {2,3,4}, d_R in {2,4,8}, Haar U.

    Starts from the maximally mixed system state, the regime in which the
    two-sided sandwich between the initial and final system states holds
    for every unitary.
    """
    rng = np.random.default_rng(20260816)
    instances = []
    for _ in range(500):
        d_s = int(rng.choice([2, 3, 4]))
        d_r = int(rng.choice([2, 4, 8]))
        beta = float(rng.uniform(0.5, 2.0))
        r = ReservoirSpec(h_r=random_hermitian(d_r, rng), beta=beta)
        u = haar_unitary(d_s * d_r, rng)
        rho_i = np.eye(d_s) / d_s
        instances.append((rho_i, r, u, apply_process(rho_i, r, u)))
    return instances


@pytest.fixture(scope="session")
def quench_trajectory():
    """Bundled switched-coupling run: qubit + 4-qubit chain, lam = 0.2."""
    cfg = parse_config({"scenario": "instantaneous-quench"})
    r = build_reservoir(cfg.section("reservoir"))
    spec = InteractionSpec(h_s=0.5 * SIGMA_Z, v=site_coupling(r.dim), lam=0.2)
    times = np.linspace(0.0, 20.0, 81)
    return evolve_instantaneous(np.eye(2) / 2, r, spec, times, flux_dt=0.005)


@pytest.fixture(scope="session")
def adiabatic_run():
    """Bundled slow-erasure sweep: qubit + 6-qubit chain, T in {5,10,20,40}."""
    cfg = parse_config({"scenario": "adiabatic-sweep"})
    r = build_reservoir(cfg.section("reservoir"))
    rho_i = np.eye(2) / 2
    rho_f = np.diag([0.75, 0.25])
    protocol = erasure_protocol(rho_i, rho_f, r.beta, r.dim,
                                v=site_coupling(r.dim), lam=0.6)
    return adiabatic_sweep(protocol, r, rho_i, [5.0, 10.0, 20.0, 40.0],
                           steps=2000, panels=16)
