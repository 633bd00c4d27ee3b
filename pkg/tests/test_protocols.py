"""Interaction specs and switching-protocol construction."""

import numpy as np
import pytest

from landauer import (
    InteractionSpec,
    SwitchingProtocol,
    bump,
    constant_protocol,
    erasure_protocol,
    interpolation_protocol,
    random_protocol,
    smooth_ramp,
    smooth_ramp_deriv,
)
from landauer import qmat
from conftest import SIGMA_X, SIGMA_Z, site_coupling


def test_smooth_ramp_shape():
    assert smooth_ramp(0.0) == 0.0
    assert smooth_ramp(1.0) == 1.0
    assert smooth_ramp_deriv(0.0) == 0.0
    assert smooth_ramp_deriv(1.0) == 0.0
    gs = np.linspace(0.0, 1.0, 50)
    assert np.all(np.diff(smooth_ramp(gs)) > 0)  # strictly monotone inside
    h = 1e-6
    for g in (0.2, 0.5, 0.8):
        fd = (smooth_ramp(g + h) - smooth_ramp(g - h)) / (2 * h)
        assert smooth_ramp_deriv(g) == pytest.approx(fd, abs=1e-8)


def test_bump_is_interior_only():
    assert bump(0.0) == pytest.approx(0.0, abs=1e-15)
    assert bump(1.0) == pytest.approx(0.0, abs=1e-30)
    assert bump(0.5) == pytest.approx(1.0, abs=1e-15)


def test_interaction_spec_coupling_and_dims():
    spec = InteractionSpec(h_s=0.5 * SIGMA_Z, v=site_coupling(4), lam=0.3)
    assert spec.dim_s == 2 and spec.dim_r == 4
    want = qmat.tensor(0.5 * SIGMA_Z, np.eye(4)) + 0.3 * site_coupling(4)
    np.testing.assert_allclose(spec.coupling(), want, atol=1e-14)
    with pytest.raises(ValueError):
        InteractionSpec(h_s=np.zeros((3, 3)), v=site_coupling(2), lam=0.1)


def test_interpolation_protocol_endpoints_are_system_only():
    protocol = interpolation_protocol(SIGMA_X, SIGMA_Z, 2, v=site_coupling(2), lam=0.7)
    np.testing.assert_allclose(protocol.k(0.0), qmat.tensor(SIGMA_X, np.eye(2)), atol=1e-14)
    np.testing.assert_allclose(protocol.k(1.0), qmat.tensor(SIGMA_Z, np.eye(2)), atol=1e-12)
    assert protocol.validate_derivative() <= 1e-6
    with pytest.raises(ValueError):
        interpolation_protocol(SIGMA_X, SIGMA_Z, 2, v=np.zeros((6, 6)))


def test_erasure_protocol_boundaries_pin_the_states():
    rho_i = np.eye(2) / 2
    rho_f = np.diag([0.75, 0.25])
    beta = 1.3
    protocol = erasure_protocol(rho_i, rho_f, beta, 2, v=site_coupling(2), lam=0.5)
    want0 = qmat.tensor(-qmat.matrix_function(rho_i, np.log) / beta, np.eye(2))
    want1 = qmat.tensor(-qmat.matrix_function(rho_f, np.log) / beta, np.eye(2))
    np.testing.assert_allclose(protocol.k(0.0), want0, atol=1e-12)
    np.testing.assert_allclose(protocol.k(1.0), want1, atol=1e-12)
    with pytest.raises(ValueError):
        erasure_protocol(rho_i, np.diag([1.0, 0.0]), beta, 2)
    with pytest.raises(ValueError):
        erasure_protocol(rho_i, rho_f, 0.0, 2)


def test_validate_derivative_catches_a_broken_slope():
    protocol = interpolation_protocol(SIGMA_X, SIGMA_Z, 2)
    broken = SwitchingProtocol(k=protocol.k, dk=lambda g: 2.0 * protocol.dk(g),
                               dim=protocol.dim)
    with pytest.raises(ValueError):
        broken.validate_derivative()


def test_random_protocol_boundary_matching():
    rng = np.random.default_rng(90)
    open_ends = random_protocol(4, rng, scale=0.8)
    assert open_ends.validate_derivative() <= 1e-6
    matched = random_protocol(4, rng, scale=0.8, boundary_matched=True)
    np.testing.assert_allclose(matched.k(0.0), matched.k(1.0), atol=1e-12)


def test_constant_protocol_has_zero_slope():
    k0 = qmat.tensor(SIGMA_Z, np.eye(2))
    protocol = constant_protocol(k0)
    np.testing.assert_allclose(protocol.k(0.3), k0, atol=1e-15)
    assert qmat.max_abs(protocol.dk(0.7)) == 0.0
    assert protocol.validate_derivative() <= 1e-12
