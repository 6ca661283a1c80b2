"""Projection-based convex solvers shared by the cone and norm machinery.

Everything operates on lists of Hermitian matrices ("blocks") so that product
constraints (e.g. a pair ``(c_plus, c_minus)``) fit the same interface.  The
two workhorses are cyclic Dykstra projections for conic feasibility and a
Douglas-Rachford splitting for the trace-norm decomposition behind the
``conv(PSD u PPT)`` base norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .linalg import partial_transpose

Blocks = list[np.ndarray]
Projection = Callable[[Blocks], Blocks]


@dataclass
class DykstraResult:
    blocks: Blocks
    residual: float
    iterations: int
    converged: bool


def project_psd(H: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(0.5 * (H + H.conj().T))
    return (vectors * np.maximum(values, 0.0)) @ vectors.conj().T


def project_psd_stack(blocks: Blocks) -> Blocks:
    """Project every block onto the psd cone with one batched eigh call."""
    if len({b.shape for b in blocks}) == 1:
        stack = np.stack([0.5 * (b + b.conj().T) for b in blocks])
        values, vectors = np.linalg.eigh(stack)
        clipped = np.maximum(values, 0.0)
        out = np.einsum("bij,bj,bkj->bik", vectors, clipped, vectors.conj())
        return [out[i] for i in range(len(blocks))]
    return [project_psd(b) for b in blocks]


def project_ppt(H: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Project onto the cone of matrices with psd partial transpose."""
    return partial_transpose(project_psd(partial_transpose(H, d1, d2)), d1, d2)


def dykstra(
    projections: Sequence[Projection],
    start: Blocks,
    tol: float = 1e-9,
    max_iter: int = 20000,
) -> DykstraResult:
    """Cyclic Dykstra projections onto the intersection of convex sets.

    The residual is the largest movement produced by any single projection in
    the latest cycle; it vanishes exactly on points of the intersection.
    When the sets do not intersect the residual stalls at a positive value
    and the result comes back with ``converged=False``.
    """
    x = [b.copy() for b in start]
    corrections = [[np.zeros_like(b) for b in start] for _ in projections]
    residual = np.inf
    for it in range(1, max_iter + 1):
        residual = 0.0
        for k, proj in enumerate(projections):
            shifted = [xi + ci for xi, ci in zip(x, corrections[k])]
            y = proj(shifted)
            residual = max(
                residual,
                max(float(np.max(np.abs(yi - xi))) if yi.size else 0.0 for yi, xi in zip(y, x)),
            )
            corrections[k] = [si - yi for si, yi in zip(shifted, y)]
            x = y
        if residual <= tol:
            return DykstraResult(x, residual, it, True)
    return DykstraResult(x, residual, max_iter, False)


def alternating_projections(
    projections: Sequence[Projection],
    start: Blocks,
    tol: float = 1e-9,
    max_iter: int = 20000,
) -> DykstraResult:
    """Plain cyclic projections; enough for feasibility questions."""
    x = [b.copy() for b in start]
    residual = np.inf
    for it in range(1, max_iter + 1):
        residual = 0.0
        for proj in projections:
            y = proj(x)
            residual = max(
                residual,
                max(float(np.max(np.abs(yi - xi))) if yi.size else 0.0 for yi, xi in zip(y, x)),
            )
            x = y
        if residual <= tol:
            return DykstraResult(x, residual, it, True)
    return DykstraResult(x, residual, max_iter, False)


def soft_threshold_eigenvalues(H: np.ndarray, t: float) -> np.ndarray:
    """Proximal map of ``t * trace_norm`` : shrink eigenvalues towards zero."""
    values, vectors = np.linalg.eigh(0.5 * (H + H.conj().T))
    shrunk = np.sign(values) * np.maximum(np.abs(values) - t, 0.0)
    return (vectors * shrunk) @ vectors.conj().T


def prox_negative_part(H: np.ndarray, t: float) -> np.ndarray:
    """Proximal map of ``t * (trace of the negative part)``.

    Acts eigenvalue-wise: nonnegative eigenvalues stay, eigenvalues below
    ``-t`` shift up by ``t``, the band in between collapses to zero.
    """
    values, vectors = np.linalg.eigh(0.5 * (H + H.conj().T))
    u = np.where(values >= 0.0, values, np.where(values <= -t, values + t, 0.0))
    return (vectors * u) @ vectors.conj().T


@dataclass
class NegativitySplitResult:
    value: float          # minimal total negativity of the split
    a: np.ndarray         # psd-side part, v = a + b
    dual: np.ndarray      # box element with <dual, v> = -value at optimum
    residual: float
    iterations: int
    converged: bool


def negativity_split(
    v: np.ndarray,
    d1: int,
    d2: int,
    tol: float = 1e-12,
    max_iter: int = 20000,
    step: float = 1.0,
) -> NegativitySplitResult:
    """Minimize ``negpart(a) + negpart((v - a)^{T1})`` over Hermitian ``a``.

    The optimal value vanishes exactly when ``v`` lies in the cone generated
    by psd and ppt matrices; otherwise it equals
    ``max{ -<W, v> : 0 <= W <= I, 0 <= W^{T1} <= I }`` and the returned dual
    variable approaches a maximizer, i.e. a separating functional.
    """
    v = np.asarray(v, dtype=complex)
    scale = 1.0 + float(np.max(np.abs(v)))

    def prox_f(x, t):
        return prox_negative_part(x, t)

    def prox_g(x, t):
        w = prox_negative_part(partial_transpose(v - x, d1, d2), t)
        return v - partial_transpose(w, d1, d2)

    z = v.copy()
    residual = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        a = prox_f(z, step)
        y = prox_g(2.0 * a - z, step)
        z = z + (y - a)
        residual = float(np.max(np.abs(y - a)))
        if residual <= tol * scale:
            break
    a = prox_f(z, step)
    dual = -(z - a) / step
    neg_a = float(np.sum(np.maximum(-np.linalg.eigvalsh(0.5 * (a + a.conj().T)), 0.0)))
    bt = partial_transpose(v - a, d1, d2)
    neg_b = float(np.sum(np.maximum(-np.linalg.eigvalsh(0.5 * (bt + bt.conj().T)), 0.0)))
    return NegativitySplitResult(neg_a + neg_b, a, dual, residual, it, residual <= tol * scale)


@dataclass
class SplitNormResult:
    value: float
    a: np.ndarray       # trace-norm part
    b: np.ndarray       # partial-transpose part, v = a + b
    dual: np.ndarray    # at optimum: ||dual||_inf <= 1, ||dual^T1||_inf <= 1, <dual,v> = value
    residual: float
    iterations: int
    converged: bool


def split_trace_norm_min(
    v: np.ndarray,
    d1: int,
    d2: int,
    tol: float = 1e-9,
    max_iter: int = 20000,
    step: float = 1.0,
) -> SplitNormResult:
    """Minimize ``||a||_1 + ||(v - a)^{T1}||_1`` over Hermitian ``a``.

    Douglas-Rachford on f(a) = ||a||_1, g(a) = ||(v-a)^{T1}||_1, both of
    which have closed-form proximal maps (eigenvalue soft-thresholding,
    conjugated by the partial transpose for g).  The optimal value is the
    base norm of ``v`` for the cone generated by PSD and PPT matrices.
    """
    v = np.asarray(v, dtype=complex)

    def prox_f(x: np.ndarray, t: float) -> np.ndarray:
        return soft_threshold_eigenvalues(x, t)

    def prox_g(x: np.ndarray, t: float) -> np.ndarray:
        w = soft_threshold_eigenvalues(partial_transpose(v - x, d1, d2), t)
        return v - partial_transpose(w, d1, d2)

    z = v.copy()
    a = prox_f(z, step)
    residual = np.inf
    for it in range(1, max_iter + 1):
        a = prox_f(z, step)
        y = prox_g(2.0 * a - z, step)
        z = z + (y - a)
        residual = float(np.max(np.abs(y - a)))
        if residual <= tol:
            break
    a = prox_f(z, step)
    b = v - a
    dual = (z - a) / step
    values_a = np.linalg.eigvalsh(0.5 * (a + a.conj().T))
    bt = partial_transpose(b, d1, d2)
    values_b = np.linalg.eigvalsh(0.5 * (bt + bt.conj().T))
    value = float(np.sum(np.abs(values_a)) + np.sum(np.abs(values_b)))
    return SplitNormResult(value, a, b, dual, residual, it, residual <= tol)
