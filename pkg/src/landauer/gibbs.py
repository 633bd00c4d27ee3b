"""Gibbs states, the target-Hamiltonian solver, and free-energy identities.

The central inverse problem: given a coupling lambda V to a reservoir and a
faithful target state rho_f on the system, find a system Hamiltonian X such
that the system marginal of the joint Gibbs state of

    H = 1 (x) H_R + X (x) 1 + lambda V

equals rho_f. At lambda = 0 the answer is X = -log(rho_f)/beta; for small
lambda a Newton iteration on the traceless-Hermitian space (dimension
d^2 - 1) converges quadratically because the derivative of the marginal map
is symmetric negative definite there. The derivative is evaluated exactly
through the Duhamel formula

    d/de e^{-beta(A + e B)} |_0  =  -int_0^beta e^{-sA} B e^{-(beta-s)A} ds,

which in the eigenbasis of A is entrywise multiplication by the divided
differences of exp(-beta .).

Also here: the finite-dimensional free-energy identities used by the
quasi-static analysis. For a protocol gamma -> K(gamma),

    tr(mu_gamma dK(gamma)) = -beta^{-1} d/dgamma log Z(gamma)      (Kubo)
    int_0^1 tr(mu_gamma dK(gamma)) dgamma = -beta^{-1} Delta log Z (integration)

with mu_gamma the Gibbs state of 1 (x) H_R + K(gamma); the integral vanishes
whenever the endpoint partition functions match.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import qmat
from .errors import MaxIterationsError, SingularJacobianError

if TYPE_CHECKING:  # import only for annotations; runtime uses attributes
    from .processes import ReservoirSpec
    from .protocols import InteractionSpec, SwitchingProtocol

# Eigenvalue gaps below this use the series form of the divided difference.
_KERNEL_GAP = 1e-8

# Armijo line search: sufficient-decrease slope and smallest step.
_ARMIJO_SLOPE = 1e-4
_MIN_STEP = 2.0 ** -20


def gibbs_state(h: np.ndarray, beta: float) -> np.ndarray:
    """Thermal state e^{-beta h} / tr(e^{-beta h}).

    The exponent is shifted by its maximum before exponentiating, so large
    beta or large spectra never overflow.
    """
    if beta < 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    w, v = qmat.hermitian_eig(h)
    x = -beta * w
    x -= x.max()
    p = np.exp(x)
    p /= p.sum()
    return qmat.hermitian_part((v * p) @ v.conj().T)


def log_partition(k: np.ndarray, r: "ReservoirSpec") -> float:
    """log tr e^{-beta (1 (x) H_R + k)} with overflow-safe shift."""
    k = qmat.check_hermitian(k, name="K")
    _, h_full = _full_hamiltonian(k, r)
    w = np.linalg.eigvalsh(h_full)
    x = -r.beta * w
    m = float(x.max())
    return m + float(np.log(np.exp(x - m).sum()))


def gibbs_marginal(x: np.ndarray, spec: "InteractionSpec", r: "ReservoirSpec") -> np.ndarray:
    """System marginal of the joint Gibbs state of 1 (x) H_R + x (x) 1 + lam V."""
    x = qmat.check_hermitian(x, name="X")
    dim_s = x.shape[0]
    dim_r = r.dim
    full = _coupled_hamiltonian(x, spec, r)
    return qmat.partial_trace(gibbs_state(full, r.beta), dim_s, dim_r, keep="S")


def duhamel_derivative(
    x: np.ndarray, y: np.ndarray, spec: "InteractionSpec", r: "ReservoirSpec"
) -> np.ndarray:
    """Directional derivative of gibbs_marginal at x along the direction y.

    Exact (no quadrature): the Duhamel integral is the divided-difference
    kernel of exp(-beta .) in the eigenbasis of the full Hamiltonian. The
    identity direction y = 1 returns zero because normalization cancels the
    gauge.
    """
    x = qmat.check_hermitian(x, name="X")
    y = qmat.check_hermitian(y, name="Y")
    cache = _marginal_cache(x, spec, r)
    return _marginal_derivative(cache, y)


@dataclass(frozen=True)
class TargetSolveResult:
    """Outcome of the target-Hamiltonian Newton solve.

    hamiltonian is the traceless representative; adding trace_gauge times
    the identity reproduces -log(rho_f)/beta exactly at lambda = 0 and fixes
    a definite gauge otherwise (the marginal is invariant under the shift).
    """

    hamiltonian: np.ndarray
    trace_gauge: float
    iterations: int
    residual: float
    jacobian_conditioning: float
    residual_history: tuple[float, ...]


def solve_target_hamiltonian(
    rho_f: np.ndarray,
    spec: "InteractionSpec",
    r: "ReservoirSpec",
    tol: float = 1e-10,
    max_iter: int = 30,
    x0: np.ndarray | None = None,
) -> TargetSolveResult:
    """Newton solve for X with gibbs_marginal(X) = rho_f, trace-norm residual <= tol.

    Works on the traceless-Hermitian coordinate space of dimension d^2 - 1
    (the identity component is pure gauge), with the exact Duhamel Jacobian
    and Armijo backtracking (halving, smallest step 2^-20). Initialized at
    the uncoupled solution -log(rho_f)/beta unless x0 is given.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    rho_f = qmat.check_density(rho_f, name="rho_f")
    dim_s = rho_f.shape[0]
    basis = _traceless_basis(dim_s)
    m = len(basis)

    h_uncoupled = -qmat.matrix_function(rho_f, np.log) / r.beta
    gauge = float(np.real(np.trace(h_uncoupled))) / dim_s
    x = h_uncoupled - gauge * np.eye(dim_s) if x0 is None else qmat.check_hermitian(x0, name="x0")

    def mismatch(xx: np.ndarray) -> np.ndarray:
        return gibbs_marginal(xx, spec, r) - rho_f

    f = mismatch(x)
    resid = qmat.trace_norm(f)
    history = [resid]
    cond = 0.0
    if resid <= tol:
        return TargetSolveResult(x, gauge, 0, resid, cond, tuple(history))

    for iteration in range(1, max_iter + 1):
        cache = _marginal_cache(x, spec, r)
        jac = np.empty((m, m))
        for col, e in enumerate(basis):
            de = _marginal_derivative(cache, e)
            jac[:, col] = [float(np.real(np.trace(b @ de))) for b in basis]
        cond = float(np.linalg.cond(jac))
        if not np.isfinite(cond) or cond > 1e14:
            raise SingularJacobianError(f"Jacobian condition number {cond:.3e}")
        rhs = np.array([-float(np.real(np.trace(b @ f))) for b in basis])
        try:
            delta = np.linalg.solve(jac, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobianError(str(exc)) from exc
        step = sum(d * e for d, e in zip(delta, basis))

        alpha = 1.0
        while alpha >= _MIN_STEP:
            x_new = qmat.hermitian_part(x + alpha * step)
            f_new = mismatch(x_new)
            r_new = qmat.trace_norm(f_new)
            if r_new <= (1.0 - _ARMIJO_SLOPE * alpha) * resid:
                break
            alpha /= 2.0
        else:
            raise MaxIterationsError(
                f"line search stalled at residual {resid:.3e} (iteration {iteration})"
            )
        x, f, resid = x_new, f_new, r_new
        history.append(resid)
        if resid <= tol:
            return TargetSolveResult(x, gauge, iteration, resid, cond, tuple(history))

    raise MaxIterationsError(
        f"no convergence to {tol:.1e} in {max_iter} iterations (residual {resid:.3e})"
    )


@dataclass(frozen=True)
class KuboCheck:
    """Pointwise comparison of tr(mu dK) with -beta^{-1} d log Z / dgamma."""

    gammas: np.ndarray
    gibbs_side: np.ndarray
    free_energy_side: np.ndarray

    @property
    def max_mismatch(self) -> float:
        return float(np.max(np.abs(self.gibbs_side - self.free_energy_side)))


def kubo_identity_check(
    protocol: "SwitchingProtocol", r: "ReservoirSpec", grid, fd_step: float = 1e-4
) -> KuboCheck:
    """Check the Kubo identity on a grid of protocol parameters.

    Grid points are clipped into [fd_step, 1 - fd_step] so the central
    difference of log Z stays inside the protocol domain.
    """
    gammas = np.clip(np.asarray(grid, dtype=float), fd_step, 1.0 - fd_step)
    lhs = np.empty_like(gammas)
    rhs = np.empty_like(gammas)
    for idx, gamma in enumerate(gammas):
        _, h_full = _full_hamiltonian(protocol.k(gamma), r)
        mu = gibbs_state(h_full, r.beta)
        lhs[idx] = float(np.real(np.trace(mu @ protocol.dk(gamma))))
        plus = log_partition(protocol.k(gamma + fd_step), r)
        minus = log_partition(protocol.k(gamma - fd_step), r)
        rhs[idx] = -(plus - minus) / (2.0 * fd_step * r.beta)
    return KuboCheck(gammas=gammas, gibbs_side=lhs, free_energy_side=rhs)


def thermodynamic_integration(
    protocol: "SwitchingProtocol", r: "ReservoirSpec", panels: int = 16
) -> float:
    """int_0^1 tr(mu_gamma dK(gamma)) dgamma by composite Gauss-Legendre.

    Equals -beta^{-1} (log Z(1) - log Z(0)) up to quadrature error, hence 0
    for boundary-matched protocols.
    """
    if panels < 1:
        raise ValueError(f"panels must be >= 1, got {panels}")
    nodes, weights = np.polynomial.legendre.leggauss(8)
    total = 0.0
    width = 1.0 / panels
    for p in range(panels):
        mid = (p + 0.5) * width
        for node, weight in zip(nodes, weights):
            gamma = mid + 0.5 * width * node
            _, h_full = _full_hamiltonian(protocol.k(gamma), r)
            mu = gibbs_state(h_full, r.beta)
            total += 0.5 * width * weight * float(np.real(np.trace(mu @ protocol.dk(gamma))))
    return total


# ---------------------------------------------------------------------------
# internals

def _full_hamiltonian(k: np.ndarray, r: "ReservoirSpec") -> tuple[int, np.ndarray]:
    """1 (x) H_R + k, inferring the system dimension from k."""
    dim = k.shape[0]
    if dim % r.dim != 0:
        raise ValueError(f"operator dimension {dim} not a multiple of reservoir dimension {r.dim}")
    dim_s = dim // r.dim
    return dim_s, qmat.tensor(np.eye(dim_s), r.h_r) + k


def _coupled_hamiltonian(x: np.ndarray, spec: "InteractionSpec", r: "ReservoirSpec") -> np.ndarray:
    dim_s = x.shape[0]
    dim_r = r.dim
    if spec.v.shape[0] != dim_s * dim_r:
        raise ValueError(
            f"V dimension {spec.v.shape[0]} incompatible with system {dim_s} x reservoir {dim_r}"
        )
    return (
        qmat.tensor(np.eye(dim_s), r.h_r)
        + qmat.tensor(x, np.eye(dim_r))
        + spec.lam * spec.v
    )


@dataclass(frozen=True)
class _MarginalCache:
    """Shared eigen-data for derivative directions at a fixed base point."""

    dim_s: int
    dim_r: int
    beta: float
    eigvecs: np.ndarray
    weights: np.ndarray      # shifted Boltzmann weights e^{-beta(w - w_min)}
    weight_sum: float
    kernel: np.ndarray       # divided differences of the shifted exponential
    gibbs: np.ndarray


def _marginal_cache(x: np.ndarray, spec: "InteractionSpec", r: "ReservoirSpec") -> _MarginalCache:
    beta = r.beta
    full = _coupled_hamiltonian(x, spec, r)
    w, v = qmat.hermitian_eig(full)
    shifted = -beta * (w - w.min())
    ew = np.exp(shifted)
    z = float(ew.sum())

    diff = np.subtract.outer(w, w)
    near = np.abs(diff) < _KERNEL_GAP
    # divided difference (e^{-beta a} - e^{-beta b})/(a - b); series form
    # -beta e^{-beta (a+b)/2} (1 + (beta (a-b))^2 / 24 + ...) near the diagonal
    num = np.subtract.outer(ew, ew)
    kernel = np.where(near, 1.0, num) / np.where(near, 1.0, diff)
    mean = 0.5 * np.add.outer(shifted, shifted)
    series = -beta * np.exp(mean) * (1.0 + (beta * diff) ** 2 / 24.0)
    kernel = np.where(near, series, kernel)

    gibbs = qmat.hermitian_part((v * (ew / z)) @ v.conj().T)
    return _MarginalCache(
        dim_s=x.shape[0], dim_r=r.dim, beta=beta,
        eigvecs=v, weights=ew, weight_sum=z, kernel=kernel, gibbs=gibbs,
    )


def _marginal_derivative(cache: _MarginalCache, y: np.ndarray) -> np.ndarray:
    """Derivative of the normalized marginal along y using cached eigen-data."""
    v = cache.eigvecs
    b_full = qmat.tensor(y, np.eye(cache.dim_r))
    b_eig = v.conj().T @ b_full @ v
    de = v @ (b_eig * cache.kernel) @ v.conj().T          # derivative of e^{-beta H}
    trace_de = float(np.real(np.trace(de)))
    dg = de / cache.weight_sum - cache.gibbs * (trace_de / cache.weight_sum)
    return qmat.hermitian_part(
        qmat.partial_trace(dg, cache.dim_s, cache.dim_r, keep="S")
    )


def _traceless_basis(dim: int) -> list[np.ndarray]:
    """Orthonormal basis of traceless Hermitian dim x dim matrices.

    Generalized Gell-Mann construction: real and imaginary off-diagonal
    pairs plus diagonal ladder matrices, orthonormal under tr(AB).
    """
    basis: list[np.ndarray] = []
    for i in range(dim):
        for j in range(i + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[i, j] = sym[j, i] = 1.0 / np.sqrt(2.0)
            basis.append(sym)
            asym = np.zeros((dim, dim), dtype=complex)
            asym[i, j] = -1j / np.sqrt(2.0)
            asym[j, i] = 1j / np.sqrt(2.0)
            basis.append(asym)
    for k in range(1, dim):
        diag = np.zeros(dim)
        diag[:k] = 1.0
        diag[k] = -k
        basis.append(np.diag(diag / np.sqrt(k * (k + 1))).astype(complex))
    return basis
