"""Interaction specifications and switching protocols.

An InteractionSpec is a fixed coupling K = H_S (x) 1 + lambda V between the
system and the reservoir. A SwitchingProtocol is a differentiable family
gamma in [0,1] -> K(gamma) of such couplings on the full space; slowing it
down as K_T(t) = K(t/T) gives the quasi-static drives studied in dynamics.

Erasure protocols interpolate between system-only Hamiltonians that pin the
initial and target states as Gibbs states, K(0) = -log(rho_i)/beta (x) 1 and
K(1) = -log(rho_f)/beta (x) 1, while the system-reservoir coupling switches
on and off strictly inside (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import qmat


@dataclass(frozen=True)
class InteractionSpec:
    """Instantaneously switched coupling K = H_S (x) 1 + lambda V.

    h_s acts on the system alone; v is Hermitian on the full space.
    """

    h_s: np.ndarray
    v: np.ndarray
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "h_s", qmat.check_hermitian(self.h_s, name="H_S"))
        object.__setattr__(self, "v", qmat.check_hermitian(self.v, name="V"))
        if self.v.shape[0] % self.h_s.shape[0] != 0:
            raise ValueError(
                f"V dimension {self.v.shape[0]} not a multiple of H_S dimension {self.h_s.shape[0]}"
            )

    @property
    def dim_s(self) -> int:
        return self.h_s.shape[0]

    @property
    def dim_r(self) -> int:
        return self.v.shape[0] // self.h_s.shape[0]

    def coupling(self) -> np.ndarray:
        """K = H_S (x) 1 + lambda V on the full space."""
        return qmat.tensor(self.h_s, np.eye(self.dim_r)) + self.lam * self.v


@dataclass(frozen=True)
class SwitchingProtocol:
    """Differentiable family gamma -> K(gamma) on the full space.

    k and dk map gamma in [0,1] to Hermitian matrices of size dim; dk must
    be the derivative of k (validate_derivative spot-checks this with
    central differences).
    """

    k: Callable[[float], np.ndarray] = field(repr=False)
    dk: Callable[[float], np.ndarray] = field(repr=False)
    dim: int

    def validate_derivative(self, probes: int = 7, tol: float = 1e-6, h: float = 1e-6) -> float:
        """Max mismatch between dk and a central difference of k on a probe grid."""
        worst = 0.0
        for gamma in np.linspace(h, 1.0 - h, probes):
            fd = (self.k(gamma + h) - self.k(gamma - h)) / (2.0 * h)
            scale = max(qmat.max_abs(self.dk(gamma)), 1.0)
            worst = max(worst, qmat.max_abs(self.dk(gamma) - fd) / scale)
        if worst > tol:
            raise ValueError(f"dk disagrees with finite differences of k: {worst:.3e}")
        return worst


def smooth_ramp(gamma):
    """Monotone C^2 ramp 6g^5 - 15g^4 + 10g^3: 0 -> 1 with flat endpoints."""
    g = np.clip(gamma, 0.0, 1.0)
    return g * g * g * (10.0 + g * (-15.0 + 6.0 * g))


def smooth_ramp_deriv(gamma):
    g = np.clip(gamma, 0.0, 1.0)
    return 30.0 * g * g * (1.0 - g) ** 2


def bump(gamma):
    """sin^2(pi g): 0 at both endpoints, on strictly inside (0,1)."""
    return float(np.sin(np.pi * gamma) ** 2)


def bump_deriv(gamma):
    return float(np.pi * np.sin(2.0 * np.pi * gamma))


def interpolation_protocol(
    h0_s: np.ndarray,
    h1_s: np.ndarray,
    dim_r: int,
    v: np.ndarray | None = None,
    lam: float = 0.0,
) -> SwitchingProtocol:
    """Protocol ramping H_S from h0_s to h1_s with a bump-switched coupling.

    K(g) = ((1-r(g)) h0_s + r(g) h1_s) (x) 1 + lam * sin^2(pi g) * v, with r
    the smooth ramp. The coupling vanishes at both endpoints, so K(0), K(1)
    act on the system alone.
    """
    h0_s = qmat.check_hermitian(h0_s, name="initial H_S")
    h1_s = qmat.check_hermitian(h1_s, name="final H_S")
    dim = h0_s.shape[0] * dim_r
    eye_r = np.eye(dim_r)
    if v is None:
        v = np.zeros((dim, dim))
    v = qmat.check_hermitian(v, name="V")
    if v.shape[0] != dim:
        raise ValueError(f"V dimension {v.shape[0]} != {dim}")

    def k(gamma: float) -> np.ndarray:
        r = smooth_ramp(gamma)
        return qmat.tensor((1.0 - r) * h0_s + r * h1_s, eye_r) + (lam * bump(gamma)) * v

    def dk(gamma: float) -> np.ndarray:
        dr = smooth_ramp_deriv(gamma)
        return qmat.tensor(dr * (h1_s - h0_s), eye_r) + (lam * bump_deriv(gamma)) * v

    return SwitchingProtocol(k=k, dk=dk, dim=dim)


def erasure_protocol(
    rho_i: np.ndarray,
    rho_f: np.ndarray,
    beta: float,
    dim_r: int,
    v: np.ndarray | None = None,
    lam: float = 0.0,
) -> SwitchingProtocol:
    """Protocol with boundary K(0) = -log(rho_i)/beta (x) 1, K(1) likewise for rho_f.

    Both states must be faithful. The initial product state rho_i (x) nu_i is
    then the Gibbs state of the uncoupled Hamiltonian at gamma = 0.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    rho_i = qmat.check_density(rho_i, name="rho_i")
    rho_f = qmat.check_density(rho_f, name="rho_f")
    h0 = -qmat.matrix_function(rho_i, np.log) / beta
    h1 = -qmat.matrix_function(rho_f, np.log) / beta
    return interpolation_protocol(h0, h1, dim_r, v=v, lam=lam)


def constant_protocol(k0: np.ndarray) -> SwitchingProtocol:
    """Time-independent protocol K(g) = k0."""
    k0 = qmat.check_hermitian(k0, name="K0")
    zero = np.zeros_like(k0)
    return SwitchingProtocol(k=lambda g: k0, dk=lambda g: zero, dim=k0.shape[0])


def random_protocol(
    dim: int,
    rng: np.random.Generator,
    scale: float = 1.0,
    boundary_matched: bool = False,
) -> SwitchingProtocol:
    """Smooth random protocol K(g) = A + r(g) B + sin(pi g) C for tests.

    boundary_matched drops the ramp term so K(0) = K(1) = A and the endpoint
    partition functions coincide.
    """
    a = qmat.random_hermitian(dim, rng, scale)
    b = np.zeros((dim, dim)) if boundary_matched else qmat.random_hermitian(dim, rng, scale)
    c = qmat.random_hermitian(dim, rng, scale)

    def k(gamma: float) -> np.ndarray:
        return a + smooth_ramp(gamma) * b + float(np.sin(np.pi * gamma)) * c

    def dk(gamma: float) -> np.ndarray:
        return smooth_ramp_deriv(gamma) * b + float(np.pi * np.cos(np.pi * gamma)) * c

    return SwitchingProtocol(k=k, dk=dk, dim=dim)
