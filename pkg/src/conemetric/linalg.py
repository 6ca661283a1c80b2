"""Dense Hermitian linear algebra: eigensystems, support calculus, partial
transposition and the handful of norms everything else is built on.

All matrices are plain complex ``numpy`` arrays.  Functions validate
hermiticity where it matters and keep every rank / support decision behind a
single relative tolerance ``RANK_TOL``.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

# Relative threshold (w.r.t. the largest eigenvalue) below which an
# eigenvalue counts as zero.  Every support/rank decision goes through this.
RANK_TOL = 1e-9

HERMITICITY_TOL = 1e-12


class EigenSystem(NamedTuple):
    values: np.ndarray   # real, ascending
    vectors: np.ndarray  # orthonormal columns


def as_hermitian(H, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate and symmetrize a Hermitian matrix.

    Raises ``ValueError`` if ``H`` is not square, has non-finite entries, or
    deviates from its conjugate transpose by more than ``tol`` relative to
    the largest entry magnitude.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H.real)) or not np.all(np.isfinite(H.imag)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(H)))) if H.size else 1.0
    dev = float(np.max(np.abs(H - H.conj().T))) if H.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return 0.5 * (H + H.conj().T)


def eig_hermitian(H) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    H = as_hermitian(H)
    values, vectors = np.linalg.eigh(H)
    return EigenSystem(values, vectors)


def op_norm(H) -> float:
    """Operator norm (largest absolute eigenvalue) of a Hermitian matrix."""
    H = np.asarray(H, dtype=complex)
    if not H.size:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(H))))


def trace_norm(H) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(np.asarray(H, dtype=complex)))))


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def psd_check(H, tol: float = RANK_TOL) -> bool:
    """True iff the smallest eigenvalue is above ``-tol * (1 + op_norm)``."""
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    w = np.linalg.eigvalsh(as_hermitian(H))
    scale = 1.0 + (float(np.max(np.abs(w))) if w.size else 0.0)
    return bool(w.size == 0 or w[0] >= -tol * scale)


def eigen_split(H) -> tuple[np.ndarray, np.ndarray]:
    """Split H = P - N into its positive and negative parts (both psd)."""
    values, vectors = eig_hermitian(H)
    pos = (vectors * np.maximum(values, 0.0)) @ vectors.conj().T
    neg = (vectors * np.maximum(-values, 0.0)) @ vectors.conj().T
    return pos, neg


def support_projector(H, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Projector onto the span of eigenvectors with eigenvalue > rank_tol * max."""
    values, vectors = eig_hermitian(H)
    lam_max = float(np.max(values)) if values.size else 0.0
    if lam_max <= 0.0:
        return np.zeros_like(np.asarray(H, dtype=complex))
    keep = values > rank_tol * lam_max
    V = vectors[:, keep]
    return V @ V.conj().T


def pseudo_inv_sqrt(H, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Inverse square root on the support of a psd matrix.

    Eigenvalues at or below ``rank_tol * lam_max`` are treated as zero and
    dropped; the zero matrix maps to itself.
    """
    values, vectors = eig_hermitian(H)
    lam_max = float(np.max(values)) if values.size else 0.0
    if lam_max <= 0.0:
        return np.zeros_like(np.asarray(H, dtype=complex))
    keep = values > rank_tol * lam_max
    inv = np.zeros_like(values)
    inv[keep] = 1.0 / np.sqrt(values[keep])
    return (vectors * inv) @ vectors.conj().T


def psd_sqrt(H) -> np.ndarray:
    """Square root of a psd matrix (negative noise clipped to zero)."""
    values, vectors = eig_hermitian(H)
    root = np.sqrt(np.maximum(values, 0.0))
    return (vectors * root) @ vectors.conj().T


def support_contained(A, B, rank_tol: float = RANK_TOL) -> bool:
    """Whether supp(A) is contained in supp(B), for psd A and B.

    Checked as ``|| (I - P_B) A (I - P_B) ||_inf <= rank_tol * (1 + ||A||_inf)``
    with ``P_B`` the support projector of ``B``.
    """
    A = as_hermitian(A)
    comp = np.eye(A.shape[0]) - support_projector(B, rank_tol)
    leak = op_norm(comp @ A @ comp)
    return leak <= rank_tol * (1.0 + op_norm(A))


def partial_transpose(H, d1: int, d2: int) -> np.ndarray:
    """Transpose of the first tensor factor of a ``d1*d2``-dimensional matrix."""
    H = np.asarray(H, dtype=complex)
    n = H.shape[0]
    if H.shape != (n, n) or d1 * d2 != n:
        raise ValueError(f"shape ({d1},{d2}) incompatible with matrix of dimension {H.shape}")
    return H.reshape(d1, d2, d1, d2).transpose(2, 1, 0, 3).reshape(n, n)


def general_spectrum(M) -> np.ndarray:
    """Eigenvalues of a real square matrix, sorted by modulus descending."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    values = np.linalg.eigvals(M)
    order = np.argsort(-np.abs(values), kind="stable")
    return values[order]


def dagger(A) -> np.ndarray:
    return np.asarray(A).conj().T


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (G + G.conj().T)


def random_psd(rng: np.random.Generator, dim: int, full_rank: bool = True) -> np.ndarray:
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    H = G @ G.conj().T
    if full_rank:
        H = H + 1e-3 * np.trace(H).real / dim * np.eye(dim)
    return H


def random_density(rng: np.random.Generator, dim: int, full_rank: bool = True) -> np.ndarray:
    H = random_psd(rng, dim, full_rank=full_rank)
    return H / np.trace(H).real


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-like random pure state as a rank-one density matrix."""
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())
