"""Reference bipartite states used across the test batteries and demos."""

from __future__ import annotations

import numpy as np


def swap_operator(d: int) -> np.ndarray:
    """Flip operator F = sum_ij |ij><ji| on a d x d bipartite system."""
    F = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            F[i * d + j, j * d + i] = 1.0
    return F


def maximally_entangled(d: int) -> np.ndarray:
    """Projector Omega = |omega><omega| with |omega> = sum_i |ii>/sqrt(d)."""
    omega = np.zeros(d * d, dtype=complex)
    for i in range(d):
        omega[i * d + i] = 1.0
    omega /= np.sqrt(d)
    return np.outer(omega, omega.conj())


def symmetric_state(d: int) -> np.ndarray:
    """Normalized projector onto the symmetric subspace of C^d x C^d."""
    F = swap_operator(d)
    return (np.eye(d * d) + F) / (d * (d + 1))


def antisymmetric_state(d: int) -> np.ndarray:
    """Normalized projector onto the antisymmetric subspace of C^d x C^d."""
    F = swap_operator(d)
    return (np.eye(d * d) - F) / (d * (d - 1))


def werner_state(d: int, p: float) -> np.ndarray:
    """Mixture p * sym + (1 - p) * antisym of the normalized (anti)symmetric states."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("mixing parameter must lie in [0, 1]")
    return p * symmetric_state(d) + (1.0 - p) * antisymmetric_state(d)
