"""Finite reservoir models.

The workhorse is an open XY spin chain with transverse fields,

    H_R = sum_k (J_k / 2)(sx_k sx_{k+1} + sy_k sy_{k+1}) + sum_k (h_k / 2) sz_k.

With slightly detuned (incommensurate) couplings the spectrum is dense and
nondegenerate, which is as close to a mixing reservoir as a finite system
gets; recurrences are pushed out well beyond the simulated horizons.
"""

from __future__ import annotations

import numpy as np

from .. import qmat
from ..processes import ReservoirSpec

MAX_DIM = 4096

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1j], [1j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def _site_operator(op: np.ndarray, site: int, n: int) -> np.ndarray:
    """op acting on the given site of an n-qubit register."""
    out = np.eye(1, dtype=complex)
    for k in range(n):
        out = np.kron(out, op if k == site else np.eye(2))
    return out


def detuned_couplings(n: int, base: float = 1.0, detuning: float = 0.35) -> list[float]:
    """Deterministic incommensurate couplings around a base value.

    Uses the fractional parts of multiples of sqrt(2) so no two couplings
    are rationally related; this keeps the chain spectrum nondegenerate.
    """
    return [base + detuning * (((k + 1) * np.sqrt(2.0)) % 1.0 - 0.5) for k in range(n)]


def detuned_fields(n: int, base: float = 1.0, detuning: float = 0.35) -> list[float]:
    """Deterministic incommensurate fields, sqrt(3) variant of the above."""
    return [base + detuning * (((k + 1) * np.sqrt(3.0)) % 1.0 - 0.5) for k in range(n)]


def spin_chain_reservoir(n: int, j, h, beta: float) -> ReservoirSpec:
    """Open XY chain with transverse fields as a thermal reservoir.

    Args:
        n: number of qubits (2^n capped at 4096).
        j: nearest-neighbor couplings, length n-1 (scalar broadcasts).
        h: transverse fields, length n (scalar broadcasts).
        beta: inverse temperature.
    """
    if n < 1:
        raise ValueError(f"chain length must be >= 1, got {n}")
    if 2 ** n > MAX_DIM:
        raise ValueError(f"chain dimension 2^{n} exceeds cap {MAX_DIM}")
    j = [float(j)] * max(n - 1, 0) if np.isscalar(j) else [float(x) for x in j]
    h = [float(h)] * n if np.isscalar(h) else [float(x) for x in h]
    if len(j) != max(n - 1, 0):
        raise ValueError(f"need {n - 1} couplings, got {len(j)}")
    if len(h) != n:
        raise ValueError(f"need {n} fields, got {len(h)}")

    dim = 2 ** n
    h_r = np.zeros((dim, dim), dtype=complex)
    for k in range(n - 1):
        h_r += (j[k] / 2.0) * (
            _site_operator(SIGMA_X, k, n) @ _site_operator(SIGMA_X, k + 1, n)
            + _site_operator(SIGMA_Y, k, n) @ _site_operator(SIGMA_Y, k + 1, n)
        )
    for k in range(n):
        h_r += (h[k] / 2.0) * _site_operator(SIGMA_Z, k, n)
    return ReservoirSpec(h_r=qmat.hermitian_part(h_r), beta=beta)


def single_spin_reservoir(splitting: float, beta: float) -> ReservoirSpec:
    """Single two-level reservoir with energy splitting: H_R = diag(0, splitting)."""
    if splitting <= 0:
        raise ValueError(f"splitting must be positive, got {splitting}")
    return ReservoirSpec(h_r=np.diag([0.0, float(splitting)]), beta=beta)


def min_gap(r: ReservoirSpec) -> float:
    """Smallest spacing of the reservoir spectrum (degeneracy monitor)."""
    w = np.sort(np.linalg.eigvalsh(r.h_r))
    return float(np.min(np.diff(w))) if len(w) > 1 else 0.0
