"""Entropy functionals and lower bounds on the dissipated heat.

All entropies are in nats (k_B = 1). The central identity is the balance
equation

    Delta S + sigma = beta * Delta Q,

where Delta S = S(rho_i) - S(rho_f) is the entropy drop of the system,
beta * Delta Q is the scaled heat dumped into the reservoir, and sigma is
the entropy production: the relative entropy between the true final joint
state and the product of its system marginal with the initial reservoir
Gibbs state. sigma >= 0 gives the heat bound beta * Delta Q >= Delta S;
the refinements below tighten it for reservoirs with finite spectral span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -tr(rho log rho) in nats, with 0 log 0 = 0."""
    rho = qmat.check_density(rho)
    w = np.linalg.eigvalsh(rho)
    keep = qmat.support_mask(w)
    p = w[keep]
    s = float(-(p * np.log(p)).sum())
    # clamp the -1e-16 roundoff on pure states
    return max(s, 0.0)


def relative_entropy(zeta1: np.ndarray, zeta2: np.ndarray) -> float:
    """S(zeta1 | zeta2) = tr(zeta1 (log zeta1 - log zeta2)), +inf off-support.

    Computed in the two eigenbases. Support of each state is decided by
    qmat.support_mask; if zeta1 puts more than 1e-12 of weight outside the
    support of zeta2 the divergence is infinite and +inf is returned.
    """
    zeta1 = qmat.check_density(zeta1, name="zeta1")
    zeta2 = qmat.check_density(zeta2, name="zeta2")
    if zeta1.shape != zeta2.shape:
        raise ValueError(f"shape mismatch {zeta1.shape} vs {zeta2.shape}")
    w1, v1 = qmat.hermitian_eig(zeta1)
    w2, v2 = qmat.hermitian_eig(zeta2)
    keep1 = qmat.support_mask(w1)
    keep2 = qmat.support_mask(w2)
    # overlap[i, j] = |<v1_i | v2_j>|^2
    overlap = np.abs(v1.conj().T @ v2) ** 2
    leaked = float(w1[keep1] @ overlap[np.ix_(keep1, ~keep2)].sum(axis=1))
    if leaked > 1e-12:
        return float("inf")
    p = w1[keep1]
    own = float((p * np.log(p)).sum())
    cross = float(p @ overlap[np.ix_(keep1, keep2)] @ np.log(w2[keep2]))
    s = own - cross
    # roundoff can push S(rho|rho) to -1e-16; genuine values are >= 0
    return max(s, 0.0) if s > -1e-9 else s


def mutual_information(omega: np.ndarray, dim_s: int, dim_r: int) -> float:
    """I(S:R) = S(rho) + S(nu) - S(omega) for a joint state on H_S (x) H_R."""
    omega = qmat.check_density(omega, name="joint state")
    rho = qmat.partial_trace(omega, dim_s, dim_r, keep="S")
    nu = qmat.partial_trace(omega, dim_s, dim_r, keep="R")
    return von_neumann_entropy(rho) + von_neumann_entropy(nu) - von_neumann_entropy(omega)


def entropy_production(omega_u: np.ndarray, nu_i: np.ndarray, dim_s: int, dim_r: int) -> float:
    """sigma = S(omega_U | rho_U (x) nu_i) for the coupled final state omega_U.

    rho_U is the system marginal of omega_U and nu_i the initial reservoir
    state. Support violations report +inf rather than raising.
    """
    omega_u = qmat.check_density(omega_u, name="joint state")
    rho_u = qmat.partial_trace(omega_u, dim_s, dim_r, keep="S")
    return relative_entropy(omega_u, qmat.tensor(rho_u, nu_i))


def reservoir_span(h_r: np.ndarray) -> float:
    """Spectral span ell = e_max - e_min of the reservoir Hamiltonian."""
    w = np.linalg.eigvalsh(qmat.check_hermitian(h_r, name="reservoir Hamiltonian"))
    return float(w[-1] - w[0])


@dataclass(frozen=True)
class BalanceBound:
    """Bounds on beta * Delta Q implied by an entropy drop Delta S.

    Attributes:
        delta_s_max: largest entropy drop compatible with the reservoir,
            beta^2 ell^2 / 8 for spectral span ell.
        improved_lower_bound: minimal beta * Delta Q consistent with both
            sigma >= 0 and the quadratic well floor; equals
            2 Delta S / (1 + sqrt(1 - Delta S / delta_s_max)) when feasible.
        feasible: False when Delta S exceeds delta_s_max (no process can
            achieve the requested drop with this reservoir).
        pinsker_floor: 0.5 ||omega_U - rho_U (x) nu_i||_1^2 when evaluated
            on a concrete process instance, else 0.
        well_floor: 2 (Delta Q / ell)^2 when evaluated on an instance, else 0.
    """

    delta_s_max: float
    improved_lower_bound: float
    feasible: bool
    pinsker_floor: float = 0.0
    well_floor: float = 0.0


def improved_bound(delta_s: float, beta: float, h_r: np.ndarray) -> BalanceBound:
    """Tightened heat bound for a reservoir with finite spectral span.

    Combining sigma >= 2 (Delta Q / ell)^2 with the balance equation turns
    the bound beta * Delta Q >= Delta S into a quadratic; its smaller root

        beta * Delta Q >= 2 Delta S / (1 + sqrt(1 - Delta S / S0)),

    with S0 = beta^2 ell^2 / 8, strictly improves on Delta S for every
    Delta S in (0, S0]. Drops beyond S0 are infeasible for this reservoir.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    ell = reservoir_span(h_r)
    if ell <= 0:
        raise ValueError("reservoir Hamiltonian has zero spectral span")
    s0 = beta * beta * ell * ell / 8.0
    if delta_s > s0:
        return BalanceBound(delta_s_max=s0, improved_lower_bound=float("nan"), feasible=False)
    u = delta_s / s0
    root = np.sqrt(max(1.0 - u, 0.0))
    bound = 2.0 * delta_s / (1.0 + root) if delta_s != 0.0 else 0.0
    return BalanceBound(delta_s_max=s0, improved_lower_bound=float(bound), feasible=True)


def well_floor(delta_q: float, h_r: np.ndarray) -> float:
    """Quadratic floor 2 (Delta Q / ell)^2 on the entropy production."""
    ell = reservoir_span(h_r)
    if ell <= 0:
        raise ValueError("reservoir Hamiltonian has zero spectral span")
    return 2.0 * (delta_q / ell) ** 2


def pinsker_floor(state: np.ndarray, reference: np.ndarray) -> float:
    """Pinsker floor 0.5 ||state - reference||_1^2 on S(state | reference)."""
    return 0.5 * qmat.trace_norm(np.asarray(state) - np.asarray(reference)) ** 2
