"""Operator-algebra substrate: tensor structure, traces, eigenwork, sampling."""

import numpy as np
import pytest

from landauer import qmat


def test_tensor_is_system_major():
    a = np.diag([1.0, 2.0])
    b = np.diag([10.0, 20.0, 30.0])
    t = qmat.tensor(a, b)
    assert t.shape == (6, 6)
    # block k of the system index carries a_kk * b
    assert np.allclose(t[:3, :3], 1.0 * b)
    assert np.allclose(t[3:, 3:], 2.0 * b)


def test_partial_trace_recovers_marginals():
    rng = np.random.default_rng(3)
    rho = qmat.random_density(3, rng)
    nu = qmat.random_density(4, rng)
    joint = qmat.tensor(rho, nu)
    assert np.allclose(qmat.partial_trace(joint, 3, 4, keep="S"), rho, atol=1e-13)
    assert np.allclose(qmat.partial_trace(joint, 3, 4, keep="R"), nu, atol=1e-13)


def test_partial_trace_matches_index_sum():
    rng = np.random.default_rng(4)
    m = qmat.random_hermitian(6, rng)
    got = qmat.partial_trace(m, 2, 3, keep="S")
    want = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for k in range(3):
                want[a, b] += m[a * 3 + k, b * 3 + k]
    assert np.allclose(got, want, atol=1e-14)


def test_partial_trace_rejects_bad_keep():
    with pytest.raises(ValueError):
        qmat.partial_trace(np.eye(6), 2, 3, keep="X")


def test_hermitian_eig_descending_and_reconstructs():
    rng = np.random.default_rng(5)
    h = qmat.random_hermitian(7, rng)
    w, v = qmat.hermitian_eig(h)
    assert np.all(np.diff(w) <= 1e-14)
    assert np.allclose((v * w) @ v.conj().T, h, atol=1e-12)


def test_matrix_function_log_exp_roundtrip():
    rng = np.random.default_rng(6)
    rho = qmat.random_density(4, rng, floor=0.1)
    log_rho = qmat.matrix_function(rho, np.log)
    back = qmat.matrix_function(log_rho, np.exp)
    assert np.allclose(back, rho, atol=1e-12)


def test_matrix_function_rejects_nonfinite_values():
    singular = np.diag([1.0, 0.0])
    with pytest.raises(ValueError):
        qmat.matrix_function(singular, np.log)


def test_trace_norm_is_sum_of_absolute_eigenvalues():
    rng = np.random.default_rng(7)
    h = qmat.random_hermitian(5, rng)
    assert qmat.trace_norm(h) == pytest.approx(np.abs(np.linalg.eigvalsh(h)).sum(), abs=1e-12)


def test_haar_unitary_is_unitary_and_seeded():
    u1 = qmat.haar_unitary(8, np.random.default_rng(11))
    u2 = qmat.haar_unitary(8, np.random.default_rng(11))
    assert np.allclose(u1 @ u1.conj().T, np.eye(8), atol=1e-12)
    assert np.array_equal(u1, u2)


def test_random_density_is_faithful_state():
    rng = np.random.default_rng(12)
    rho = qmat.random_density(5, rng, floor=0.05)
    w = np.linalg.eigvalsh(rho)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert w.min() >= 0.05 / 5 - 1e-12


def test_check_density_rejections():
    with pytest.raises(ValueError):
        qmat.check_density(np.diag([0.7, 0.7]))  # trace 1.4
    with pytest.raises(ValueError):
        qmat.check_density(np.diag([1.5, -0.5]))  # negative eigenvalue
    bad = np.array([[0.5, 1.0], [0.0, 0.5]])  # not Hermitian
    with pytest.raises(ValueError):
        qmat.check_density(bad)


def test_check_unitary_rejects_contractions():
    with pytest.raises(ValueError):
        qmat.check_unitary(0.5 * np.eye(3))


def test_check_hermitian_symmetrizes_roundoff():
    h = np.array([[1.0, 0.5 + 1e-14], [0.5 - 1e-14, 2.0]])
    out = qmat.check_hermitian(h)
    assert np.allclose(out, out.conj().T)


def test_support_mask_cutoff():
    w = np.array([0.5, 1e-15, -1e-15, 0.2])
    assert list(qmat.support_mask(w)) == [True, False, False, True]
