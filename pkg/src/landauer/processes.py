"""One-shot unitary system-reservoir processes and their entropy ledgers.

A process couples the system state rho_i to a reservoir prepared in its
Gibbs state nu_i, applies a joint unitary U, and reads off the marginals:

    omega_U = U (rho_i (x) nu_i) U^dag,   rho_U = tr_R,  nu_U = tr_S.

The ledger records the entropy drop Delta S = S(rho_i) - S(rho_U), the heat
Delta Q = tr((nu_U - nu_i) H_R) dumped into the reservoir (positive means
the reservoir heated up), and the entropy production sigma, which satisfy
Delta S + sigma = beta Delta Q identically.

Besides the generic process this module implements the canonical special
cases: the flip (swap against a reservoir prepared in the target state),
staged erasure through a chain of intermediate states, the near-perfect
erasure of a maximally mixed state, and the saturation diagnostic that
recognizes reversible (sigma = 0) processes by their spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import entropy, qmat
from .errors import NumericalCheckError
from .gibbs import gibbs_state

# Relative roundoff budget for the balance identity Delta S + sigma = beta Delta Q.
BALANCE_RTOL = 1e-9


@dataclass(frozen=True)
class ReservoirSpec:
    """Reservoir Hamiltonian with its thermal data.

    Derived on construction: the Gibbs state nu_i, log partition value,
    spectral span ell = e_max - e_min, and spectral midpoint.
    """

    h_r: np.ndarray
    beta: float
    nu_i: np.ndarray = None  # type: ignore[assignment]
    log_z: float = None      # type: ignore[assignment]
    span: float = None       # type: ignore[assignment]
    midpoint: float = None   # type: ignore[assignment]

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        h_r = qmat.check_hermitian(self.h_r, name="H_R")
        w = np.linalg.eigvalsh(h_r)
        x = -self.beta * w
        m = float(x.max())
        object.__setattr__(self, "h_r", h_r)
        object.__setattr__(self, "nu_i", gibbs_state(h_r, self.beta))
        object.__setattr__(self, "log_z", m + float(np.log(np.exp(x - m).sum())))
        object.__setattr__(self, "span", float(w[-1] - w[0]))
        object.__setattr__(self, "midpoint", float((w[-1] + w[0]) / 2.0))

    @property
    def dim(self) -> int:
        return self.h_r.shape[0]

    @property
    def z(self) -> float:
        return float(np.exp(self.log_z))


@dataclass(frozen=True)
class ProcessLedger:
    """Entropy/heat bookkeeping of a single process, in nats (k_B = 1)."""

    delta_s: float
    delta_q: float
    sigma: float
    beta: float

    @property
    def beta_delta_q(self) -> float:
        return self.beta * self.delta_q

    @property
    def balance_residual(self) -> float:
        """Delta S + sigma - beta Delta Q; zero up to roundoff."""
        return self.delta_s + self.sigma - self.beta * self.delta_q

    def check_balance(self, rtol: float = BALANCE_RTOL) -> None:
        budget = rtol * (1.0 + abs(self.beta * self.delta_q))
        if not np.isfinite(self.sigma) or abs(self.balance_residual) > budget:
            raise NumericalCheckError(
                f"balance identity violated: residual {self.balance_residual:.3e}, "
                f"budget {budget:.3e}"
            )


class ProcessResult(NamedTuple):
    omega_u: np.ndarray
    rho_u: np.ndarray
    nu_u: np.ndarray
    ledger: ProcessLedger


def apply_process(rho_i: np.ndarray, r: ReservoirSpec, u: np.ndarray) -> ProcessResult:
    """Run the joint unitary u on rho_i (x) nu_i and compile the ledger."""
    rho_i = qmat.check_density(rho_i, name="rho_i")
    u = qmat.check_unitary(u, name="U")
    dim_s = rho_i.shape[0]
    dim_r = r.dim
    if u.shape[0] != dim_s * dim_r:
        raise ValueError(
            f"unitary dimension {u.shape[0]} != system {dim_s} x reservoir {dim_r}"
        )
    omega_i = qmat.tensor(rho_i, r.nu_i)
    omega_u = qmat.hermitian_part(u @ omega_i @ u.conj().T)
    rho_u = qmat.partial_trace(omega_u, dim_s, dim_r, keep="S")
    nu_u = qmat.partial_trace(omega_u, dim_s, dim_r, keep="R")
    delta_s = entropy.von_neumann_entropy(rho_i) - entropy.von_neumann_entropy(rho_u)
    delta_q = float(np.real(np.trace((nu_u - r.nu_i) @ r.h_r)))
    sigma = entropy.entropy_production(omega_u, r.nu_i, dim_s, dim_r)
    ledger = ProcessLedger(delta_s=delta_s, delta_q=delta_q, sigma=sigma, beta=r.beta)
    ledger.check_balance()
    return ProcessResult(omega_u, rho_u, nu_u, ledger)


def remark1_sandwich(rho_i: np.ndarray, r: ReservoirSpec, u: np.ndarray) -> bool:
    """Check e^{-ell beta} rho_i <= rho_U <= e^{ell beta} rho_i.

    For the maximally mixed rho_i = 1/d this two-sided sandwich is a theorem
    for every joint unitary (conjugate p_min 1 <= 1/d (x) nu_i <= p_max 1 and
    trace out the reservoir); in particular the erased marginal stays
    faithful. For general rho_i it can fail -- a swap against a reservoir
    whose Gibbs state is very different from rho_i pushes eigenvalues outside
    the window -- so this checker reports the truth value rather than
    asserting it. Eigenvalue checks allow -1e-10 slack.
    """
    result = apply_process(rho_i, r, u)
    factor = float(np.exp(r.span * r.beta))
    rho_i = qmat.check_density(rho_i)
    upper = np.linalg.eigvalsh(factor * rho_i - result.rho_u).min()
    lower = np.linalg.eigvalsh(result.rho_u - rho_i / factor).min()
    return bool(upper >= -1e-10 and lower >= -1e-10)


def swap_unitary(dim: int) -> np.ndarray:
    """Swap of the two factors of H (x) H, dimension dim^2."""
    u = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            u[i * dim + j, j * dim + i] = 1.0
    return u


def flip_process(rho_i: np.ndarray, rho_f: np.ndarray) -> tuple[ProcessLedger, np.ndarray]:
    """Erase rho_i by swapping with a reservoir prepared in the target rho_f.

    The reservoir is a copy of the system space at beta = 1 with
    H_R = -log rho_f, so nu_i = rho_f. The swap leaves rho_U = rho_f and
    nu_U = rho_i, and the entropy production is exactly S(rho_i | rho_f).
    """
    rho_i = qmat.check_density(rho_i, name="rho_i")
    rho_f = qmat.check_density(rho_f, name="rho_f")
    if rho_i.shape != rho_f.shape:
        raise ValueError(f"dimension mismatch {rho_i.shape} vs {rho_f.shape}")
    w = np.linalg.eigvalsh(rho_f)
    if not qmat.support_mask(w).all():
        raise ValueError("rho_f must be faithful (strictly positive)")
    h_r = -qmat.matrix_function(rho_f, np.log)
    r = ReservoirSpec(h_r=h_r, beta=1.0)
    result = apply_process(rho_i, r, swap_unitary(rho_i.shape[0]))
    return result.ledger, result.nu_u


def staged_erasure(
    path: Callable[[float], np.ndarray], n_stages: int
) -> tuple[float, ProcessLedger]:
    """Erasure through N intermediate states along a path of density matrices.

    Stage n swaps the system into path(n/N) using a fresh reservoir copy.
    The total heat has the closed form

        Delta Q_N = sum_n tr[(rho_n - rho_{n-1}) log rho_n],

    and the entropy production is the sum of the stagewise relative
    entropies, so the N-fold reservoir never needs to be materialized. As
    N grows Delta Q_N approaches Delta S at first order in 1/N.

    Interior and final states must be faithful; path(0) may be singular.
    """
    if n_stages < 1:
        raise ValueError(f"n_stages must be >= 1, got {n_stages}")
    states = [qmat.check_density(path(n / n_stages), name=f"path({n}/{n_stages})")
              for n in range(n_stages + 1)]
    for n, rho in enumerate(states[1:], start=1):
        if not qmat.support_mask(np.linalg.eigvalsh(rho)).all():
            raise ValueError(f"path({n}/{n_stages}) is not faithful")

    delta_q = 0.0
    sigma = 0.0
    for prev, cur in zip(states, states[1:]):
        log_cur = qmat.matrix_function(cur, np.log)
        delta_q += float(np.real(np.trace((cur - prev) @ log_cur)))
        sigma += entropy.relative_entropy(prev, cur)
    delta_s = entropy.von_neumann_entropy(states[0]) - entropy.von_neumann_entropy(states[-1])
    ledger = ProcessLedger(delta_s=delta_s, delta_q=delta_q, sigma=sigma, beta=1.0)
    ledger.check_balance()
    return delta_q, ledger


@dataclass(frozen=True)
class SaturationReport:
    """Diagnostic for the reversible case sigma = 0.

    Vanishing entropy production forces the process to do nothing
    thermodynamic: the spectra of rho_i and rho_U coincide (they are
    unitarily equivalent), the reservoir returns to nu_i, and Delta S and
    Delta Q both vanish. When sigma < tol the diagnostic asserts the
    spectrum distance and reservoir drift are below sqrt(tol) * scale.
    """

    sigma: float
    saturated: bool
    spectrum_distance: float
    reservoir_drift: float
    delta_s: float
    delta_q: float
    passed: bool


def saturation_diagnostic(
    rho_i: np.ndarray,
    rho_u: np.ndarray,
    nu_i: np.ndarray,
    nu_u: np.ndarray,
    ledger: ProcessLedger,
    tol: float = 1e-10,
    scale: float = 2.0,
) -> SaturationReport:
    """Test whether a ledger with sigma < tol shows the reversible signature."""
    spec_i = np.sort(np.linalg.eigvalsh(qmat.check_density(rho_i)))
    spec_u = np.sort(np.linalg.eigvalsh(qmat.check_density(rho_u)))
    spectrum_distance = float(np.max(np.abs(spec_i - spec_u)))
    reservoir_drift = qmat.trace_norm(np.asarray(nu_u) - np.asarray(nu_i))
    saturated = ledger.sigma < tol
    threshold = float(np.sqrt(tol)) * scale
    passed = (not saturated) or (
        spectrum_distance < threshold and reservoir_drift < threshold
    )
    return SaturationReport(
        sigma=ledger.sigma,
        saturated=saturated,
        spectrum_distance=spectrum_distance,
        reservoir_drift=reservoir_drift,
        delta_s=ledger.delta_s,
        delta_q=ledger.delta_q,
        passed=passed,
    )


@dataclass(frozen=True)
class EpsilonErasureResult:
    """Near-perfect erasure of the maximally mixed state.

    The target rho_f' = (1 - delta) |0><0| + delta 1/d has entropy at most
    eps/2; staged erasure along the linear path with n_stages stages brings
    the heat within eps of log d on both sides.
    """

    delta: float
    n_stages: int
    target_entropy: float
    ledger: ProcessLedger
    beta_delta_q: float
    history: tuple[tuple[int, float], ...]


def epsilon_erasure(d: int, eps: float, max_doublings: int = 22) -> EpsilonErasureResult:
    """Erase 1/d to a near-pure target with log d - eps <= beta dQ <= log d + eps.

    delta is found by bisection so the target entropy lands just below
    eps/2 (the lower heat bound then holds for every stage count since
    sigma >= 0); the stage count doubles until the upper side of the
    bracket holds as well.
    """
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    log_d = float(np.log(d))
    if not 0.0 < eps < log_d:
        raise ValueError(f"eps must lie in (0, log d) = (0, {log_d:.6f}), got {eps}")

    mixed = np.eye(d) / d
    pure = np.zeros((d, d))
    pure[0, 0] = 1.0

    def target(delta: float) -> np.ndarray:
        return (1.0 - delta) * pure + delta * mixed

    def target_entropy(delta: float) -> float:
        return entropy.von_neumann_entropy(target(delta))

    # entropy grows monotonically in delta on [0, 1 - 1/d]
    lo, hi = 0.0, 1.0 - 1.0 / d
    if target_entropy(hi) <= eps / 2.0:
        delta = hi
    else:
        for _ in range(80):
            mid = (lo + hi) / 2.0
            if target_entropy(mid) <= eps / 2.0:
                lo = mid
            else:
                hi = mid
        delta = lo
    if delta <= 0.0:
        raise ValueError(f"no faithful target with entropy <= eps/2 found for eps={eps}")
    rho_f = target(delta)

    def path(t: float) -> np.ndarray:
        return (1.0 - t) * mixed + t * rho_f

    history: list[tuple[int, float]] = []
    n_stages = 1
    for _ in range(max_doublings):
        delta_q, ledger = staged_erasure(path, n_stages)
        history.append((n_stages, delta_q))
        if log_d - eps <= delta_q <= log_d + eps:
            return EpsilonErasureResult(
                delta=delta,
                n_stages=n_stages,
                target_entropy=target_entropy(delta),
                ledger=ledger,
                beta_delta_q=delta_q,
                history=tuple(history),
            )
        n_stages *= 2
    raise NumericalCheckError(
        f"stage doubling exhausted without landing in [log d - eps, log d + eps]; "
        f"last beta dQ = {history[-1][1]:.6f}"
    )
