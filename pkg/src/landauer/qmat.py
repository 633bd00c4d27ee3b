"""Dense complex matrix substrate for system-reservoir calculations.

Conventions used throughout the package:

* Composite states live on H_S (x) H_R with the system index major, i.e.
  the basis label is ``i_S * dim_R + i_R`` and composite operators are
  built with ``tensor(a_S, b_R)``.
* Hermitian eigendecompositions sort eigenvalues in descending order.
* Spectral support is decided by the relative cutoff ``SUPPORT_CUTOFF``:
  an eigenvalue counts as zero when it is below ``SUPPORT_CUTOFF`` times
  the largest eigenvalue.

Everything is plain ``numpy.ndarray``; the ``check_*`` helpers validate
and canonicalize (symmetrize) inputs at module boundaries.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

# Relative spectral cutoff below which an eigenvalue of a positive
# semidefinite operator is treated as exactly zero.
SUPPORT_CUTOFF = 1e-14

# Tolerances for input validation, relative to the largest entry.
HERMITIAN_TOL = 1e-12
DENSITY_EIG_TOL = 1e-12
DENSITY_TRACE_TOL = 1e-12
UNITARY_TOL = 1e-10


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude, used as the scale for relative tolerances."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermitian_part(m: np.ndarray) -> np.ndarray:
    """(m + m^dag) / 2."""
    return (m + m.conj().T) / 2.0


def check_hermitian(m: np.ndarray, name: str = "operator") -> np.ndarray:
    """Validate that m is Hermitian up to roundoff and return (m + m^dag)/2.

    Raises ValueError if m is not square or the anti-Hermitian part exceeds
    HERMITIAN_TOL relative to the largest entry.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    scale = max_abs(m)
    drift = max_abs(m - m.conj().T)
    if drift > HERMITIAN_TOL * max(scale, 1.0):
        raise ValueError(f"{name} is not Hermitian: anti-Hermitian part {drift:.3e}")
    return hermitian_part(m)


def check_density(rho: np.ndarray, name: str = "state") -> np.ndarray:
    """Validate a density matrix: Hermitian, eigenvalues >= -1e-12, unit trace."""
    rho = check_hermitian(rho, name=name)
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > DENSITY_TRACE_TOL:
        raise ValueError(f"{name} trace deviates from 1 by {tr - 1.0:.3e}")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -DENSITY_EIG_TOL:
        raise ValueError(f"{name} has negative eigenvalue {w.min():.3e}")
    return rho


def check_unitary(u: np.ndarray, name: str = "unitary") -> np.ndarray:
    """Validate ||u^dag u - 1||_max <= 1e-10 and return u as complex ndarray."""
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {u.shape}")
    defect = max_abs(u.conj().T @ u - np.eye(u.shape[0]))
    if defect > UNITARY_TOL:
        raise ValueError(f"{name} is not unitary: defect {defect:.3e}")
    return u


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor index major (system-major)."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, dim_s: int, dim_r: int, keep: str = "S") -> np.ndarray:
    """Trace out one tensor factor of an operator on H_S (x) H_R.

    Args:
        m: operator on the composite space, shape (dim_s*dim_r, dim_s*dim_r).
        dim_s, dim_r: factor dimensions, system-major ordering.
        keep: "S" returns tr_R(m), "R" returns tr_S(m).
    """
    m = np.asarray(m, dtype=complex)
    n = dim_s * dim_r
    if m.shape != (n, n):
        raise ValueError(f"operator shape {m.shape} incompatible with dims ({dim_s},{dim_r})")
    t = m.reshape(dim_s, dim_r, dim_s, dim_r)
    if keep == "S":
        return np.einsum("arbr->ab", t)
    if keep == "R":
        return np.einsum("arab->rb", t)
    raise ValueError(f"keep must be 'S' or 'R', got {keep!r}")


def hermitian_eig(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, v) with w[0] >= w[1] >= ... and v[:, k] the eigenvector for
    w[k]. Ties keep the LAPACK ordering (stable argsort), so identical inputs
    give identical outputs.
    """
    h = check_hermitian(h, name="eig input")
    w, v = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def matrix_function(h: np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its spectrum.

    f must be finite on the spectrum of h (log of a singular positive
    operator raises). The result is symmetrized, so f real on the spectrum
    gives a Hermitian result.
    """
    w, v = hermitian_eig(h)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(w), dtype=complex)
    if not np.all(np.isfinite(fw)):
        bad = w[~np.isfinite(fw)]
        raise ValueError(f"function undefined on eigenvalues {bad}")
    return hermitian_part((v * fw) @ v.conj().T)


def trace_norm(m: np.ndarray) -> float:
    """Sum of singular values ||m||_1."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"trace_norm expects a matrix, got shape {m.shape}")
    return float(np.linalg.svd(m, compute_uv=False).sum())


def support_mask(w: np.ndarray) -> np.ndarray:
    """Boolean mask of eigenvalues that count as strictly positive.

    Entries below SUPPORT_CUTOFF * max(w) are treated as zero; tiny negative
    values from roundoff are likewise excluded.
    """
    w = np.asarray(w, dtype=float)
    top = float(w.max()) if w.size else 0.0
    return w > SUPPORT_CUTOFF * max(top, 0.0)


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed random unitary via QR of a complex Ginibre matrix.

    The R-diagonal phase correction makes the distribution exactly Haar
    rather than merely column-orthonormal.
    """
    if dim < 1:
        raise ValueError(f"dim must be positive, got {dim}")
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(dim: int, rng: np.random.Generator, floor: float = 0.02) -> np.ndarray:
    """Random faithful density matrix: Dirichlet spectrum mixed with 1/dim.

    floor > 0 keeps the smallest eigenvalue >= floor/dim so logs stay tame.
    """
    probs = (1.0 - floor) * rng.dirichlet(np.ones(dim)) + floor / dim
    u = haar_unitary(dim, rng)
    return hermitian_part((u * probs) @ u.conj().T)


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix with entries of order scale (GUE-like)."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(z) * (scale / np.sqrt(2.0))
