"""Operator cones, membership tests, sup/inf ratios and Hilbert's projective
metric.

Supported cones: the positive semidefinite cone, the cone of matrices with
psd partial transpose, their intersection, the cone generated by their union
(Minkowski sum), and deformed qubit cones whose base is a shrunken sphere or
an ellipsoid inside the Bloch ball.

Ratios ``sup(a/b) = inf{lam : a <= lam b}`` have closed forms on the psd /
ppt family; for the remaining cones a bisection over the membership test
serves as the general (and independently testable) route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import (
    RANK_TOL,
    as_hermitian,
    op_norm,
    partial_transpose,
    pseudo_inv_sqrt,
    psd_check,
    support_contained,
)
from .solvers import negativity_split, project_psd

INF = float("inf")

PSD = "psd"
PPT = "ppt"
PPT_CAP_PSD = "ppt_cap_psd"
CONV_PSD_PPT = "conv_psd_ppt"
QUBIT_DEFORMED = "qubit_deformed"

_PPT_FAMILY = (PPT, PPT_CAP_PSD, CONV_PSD_PPT)


class IndeterminateError(RuntimeError):
    """A conic feasibility question could not be decided either way."""


class ConeMembershipError(ValueError):
    """An argument required to lie in a cone does not."""


@dataclass(frozen=True)
class Deformation:
    """Base deformation of the qubit cone: sphere of radius <= 1 or an
    axis-aligned ellipsoid with semi-axes in (0, 1]."""

    kind: str  # "sphere" | "ellipsoid"
    radius: float = 1.0
    semi_axes: tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.kind == "sphere":
            if not 0.0 < self.radius <= 1.0:
                raise ValueError("sphere radius must lie in (0, 1]")
        elif self.kind == "ellipsoid":
            if not all(0.0 < s <= 1.0 for s in self.semi_axes):
                raise ValueError("ellipsoid semi-axes must lie in (0, 1]")
        else:
            raise ValueError(f"unknown deformation kind {self.kind!r}")

    def radius_at(self, direction: np.ndarray) -> float:
        """Length of the base boundary point along a unit direction."""
        if self.kind == "sphere":
            return self.radius
        u = np.asarray(direction, dtype=float)
        scaled = u / np.asarray(self.semi_axes)
        return 1.0 / float(np.linalg.norm(scaled))


@dataclass(frozen=True)
class Cone:
    kind: str
    shape: Optional[tuple[int, int]] = None
    deformation: Optional[Deformation] = None

    def __post_init__(self):
        if self.kind in _PPT_FAMILY:
            if self.shape is None:
                raise ValueError(f"cone kind {self.kind!r} needs a bipartite shape")
        elif self.kind == QUBIT_DEFORMED:
            if self.deformation is None:
                raise ValueError("deformed qubit cone needs a deformation")
        elif self.kind != PSD:
            raise ValueError(f"unknown cone kind {self.kind!r}")

    @staticmethod
    def psd() -> "Cone":
        return Cone(PSD)

    @staticmethod
    def ppt(d1: int, d2: int) -> "Cone":
        return Cone(PPT, shape=(d1, d2))

    @staticmethod
    def ppt_cap_psd(d1: int, d2: int) -> "Cone":
        return Cone(PPT_CAP_PSD, shape=(d1, d2))

    @staticmethod
    def conv_psd_ppt(d1: int, d2: int) -> "Cone":
        return Cone(CONV_PSD_PPT, shape=(d1, d2))

    @staticmethod
    def qubit_sphere(radius: float) -> "Cone":
        return Cone(QUBIT_DEFORMED, deformation=Deformation("sphere", radius=radius))

    @staticmethod
    def qubit_ellipsoid(semi_axes) -> "Cone":
        return Cone(
            QUBIT_DEFORMED,
            deformation=Deformation("ellipsoid", semi_axes=tuple(float(s) for s in semi_axes)),
        )

    def check_dim(self, dim: int) -> None:
        if self.shape is not None and self.shape[0] * self.shape[1] != dim:
            raise ValueError(f"cone shape {self.shape} incompatible with dimension {dim}")
        if self.kind == QUBIT_DEFORMED and dim != 2:
            raise ValueError("deformed cones are defined for qubits only")


# Pauli matrices, used for the Bloch decomposition of deformed-cone members.
_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def bloch_parts(H) -> tuple[float, np.ndarray]:
    """Decompose a Hermitian 2x2 matrix as (t*I + w.sigma)/2."""
    H = as_hermitian(H)
    if H.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    t = float(np.trace(H).real)
    w = np.array([float(np.trace(H @ s).real) for s in _SIGMA])
    return t, w


@dataclass
class FeasibilityResult:
    status: str  # "feasible" | "infeasible" | "indeterminate"
    P: Optional[np.ndarray] = None
    Q: Optional[np.ndarray] = None
    witness: Optional[np.ndarray] = None
    witness_value: Optional[float] = None
    residual: float = 0.0
    iterations: int = 0


def _feasibilize_box(W, d1: int, d2: int) -> Optional[np.ndarray]:
    """Repair a dual-box candidate into {0 <= W <= I, 0 <= W^{T1} <= I}.

    Eigenvalues are clipped into [0, 1]; a remaining partial-transpose
    violation is removed by blending with the strictly interior point I/2.
    The result is exactly feasible (up to eigensolver noise), so its pairing
    with any v certifies a bound."""
    n = W.shape[0]
    values, vectors = np.linalg.eigh(0.5 * (W + W.conj().T))
    W = (vectors * np.clip(values, 0.0, 1.0)) @ vectors.conj().T
    wt = np.linalg.eigvalsh(partial_transpose(W, d1, d2))
    eta = max(0.0, float(-wt[0]), float(wt[-1] - 1.0))
    if eta > 0.0:
        gamma = 2.0 * eta / (1.0 + 2.0 * eta)
        W = (1.0 - gamma) * W + gamma * 0.5 * np.eye(n)
    if np.trace(W).real <= 1e-14:
        return None
    return W


def feasibility_decompose(
    v,
    d1: int,
    d2: int,
    tol: float = 1e-9,
    max_iter: int = 20000,
) -> FeasibilityResult:
    """Try to write ``v = P + Q^{T1}`` with both P and Q psd.

    A Douglas-Rachford split minimizes the total negativity of the
    decomposition ``v = a + (v - a)``; it vanishes exactly on the cone
    generated by psd and ppt matrices.  Off the cone, the solver's dual
    variable is a separating functional (psd, with psd partial transpose,
    normalized to unit trace and ``<W, v> < 0``).  If the solver fails to
    converge the result is indeterminate, never a silent "no".
    """
    v = as_hermitian(v)
    n = v.shape[0]
    if d1 * d2 != n:
        raise ValueError("shape incompatible with matrix dimension")
    scale = 1.0 + op_norm(v)

    # Cheap sufficient decompositions before running the solver.
    if psd_check(v, tol):
        return FeasibilityResult("feasible", P=project_psd(v), Q=np.zeros_like(v), residual=0.0)
    vt = partial_transpose(v, d1, d2)
    if psd_check(vt, tol):
        return FeasibilityResult("feasible", P=np.zeros_like(v), Q=project_psd(vt), residual=0.0)
    # A certified witness is exactly feasible, so any value robustly below
    # the numerical noise floor separates; tol only governs the primal side.
    witness_floor = -1e-12 * scale

    # Cheap necessary condition: the normalized identity lies in the dual cone.
    if np.trace(v).real / n < witness_floor * 10:
        return FeasibilityResult(
            "infeasible",
            witness=np.eye(n) / n,
            witness_value=float(np.trace(v).real / n),
        )

    split = negativity_split(v, d1, d2, max_iter=max_iter)
    # The split value at any iterate upper-bounds the minimal negativity, so
    # a small value certifies membership even without full convergence.
    if split.value <= tol * scale:
        P = project_psd(split.a)
        Q = project_psd(partial_transpose(v - split.a, d1, d2))
        resid = op_norm(P + partial_transpose(Q, d1, d2) - v)
        return FeasibilityResult("feasible", P=P, Q=Q, residual=resid, iterations=split.iterations)
    W = _feasibilize_box(split.dual, d1, d2)
    if W is not None:
        value = float(np.trace(W @ v).real)
        if value < witness_floor:
            W = W / np.trace(W).real
            return FeasibilityResult(
                "infeasible",
                witness=W,
                witness_value=float(np.trace(W @ v).real),
                residual=split.value,
                iterations=split.iterations,
            )
    return FeasibilityResult("indeterminate", residual=split.residual, iterations=split.iterations)


def member(cone: Cone, H, tol: float = RANK_TOL) -> bool:
    """Cone membership within a relative tolerance.

    For the conv(PSD u PPT) cone a positive feasibility certificate or a
    separating witness is required; otherwise ``IndeterminateError`` is
    raised rather than guessing.
    """
    H = as_hermitian(H)
    cone.check_dim(H.shape[0])
    if cone.kind == PSD:
        return psd_check(H, tol)
    if cone.kind == PPT:
        d1, d2 = cone.shape
        return psd_check(partial_transpose(H, d1, d2), tol)
    if cone.kind == PPT_CAP_PSD:
        d1, d2 = cone.shape
        return psd_check(H, tol) and psd_check(partial_transpose(H, d1, d2), tol)
    if cone.kind == CONV_PSD_PPT:
        d1, d2 = cone.shape
        result = feasibility_decompose(H, d1, d2, tol=tol, max_iter=5000)
        if result.status == "feasible":
            return True
        if result.status == "infeasible":
            return False
        raise IndeterminateError(
            f"conv-cone membership undecided (gap {result.residual:.3e})"
        )
    # deformed qubit cone
    t, w = bloch_parts(H)
    norm_w = float(np.linalg.norm(w))
    band = tol * (1.0 + max(abs(t), norm_w))
    if t < -band:
        return False
    if norm_w <= band:
        return True
    radius = cone.deformation.radius_at(w / norm_w)
    return norm_w <= t * radius + band


def _require_member(cone: Cone, H, tol: float, name: str) -> None:
    if not member(cone, H, tol):
        raise ConeMembershipError(f"{name} is not an element of the {cone.kind} cone")


def _is_zero(H, tol: float = 1e-13) -> bool:
    return float(np.max(np.abs(H))) <= tol


def sup_ratio(cone: Cone, a, b, tol: float = RANK_TOL, check: bool = True) -> float:
    """sup(a/b) = inf{lam : a <= lam*b} w.r.t. the cone order.

    Closed forms cover the psd family (operator norm after conjugating with
    the pseudo-inverse square root); the intersection cone takes the larger
    of the psd and ppt values; the remaining cones go through membership
    oracles.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    cone.check_dim(a.shape[0])
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    if check:
        _require_member(cone, a, max(tol, RANK_TOL), "a")
        _require_member(cone, b, max(tol, RANK_TOL), "b")
    if _is_zero(a):
        return 0.0
    if _is_zero(b):
        return INF

    if cone.kind == PSD:
        if not support_contained(a, b, max(tol, RANK_TOL)):
            return INF
        isq = pseudo_inv_sqrt(b, max(tol, RANK_TOL))
        return op_norm(isq @ a @ isq)
    if cone.kind == PPT:
        d1, d2 = cone.shape
        return sup_ratio(
            Cone.psd(),
            partial_transpose(a, d1, d2),
            partial_transpose(b, d1, d2),
            tol=tol,
            check=False,
        )
    if cone.kind == PPT_CAP_PSD:
        d1, d2 = cone.shape
        s_psd = sup_ratio(Cone.psd(), a, b, tol=tol, check=False)
        s_ppt = sup_ratio(
            Cone.psd(),
            partial_transpose(a, d1, d2),
            partial_transpose(b, d1, d2),
            tol=tol,
            check=False,
        )
        return max(s_psd, s_ppt)
    if cone.kind == CONV_PSD_PPT:
        return sup_ratio_oracle(cone, a, b, tol=1e-6, check=False)
    return _sup_ratio_deformed(cone, a, b)


def _sup_ratio_deformed(cone: Cone, a, b, tol: float = 1e-13) -> float:
    """Bisection on lam over membership of lam*b - a in the deformed qubit
    cone, evaluated on cached Bloch components."""
    ta, wa = bloch_parts(a)
    tb, wb = bloch_parts(b)
    deformation = cone.deformation
    scale = 1.0 + max(abs(ta), abs(tb), float(np.linalg.norm(wa)), float(np.linalg.norm(wb)))

    def inside(lam: float) -> bool:
        t = lam * tb - ta
        w = lam * wb - wa
        nw = float(np.linalg.norm(w))
        band = 1e-14 * scale * max(1.0, lam)
        if t < -band:
            return False
        if nw <= band:
            return True
        return nw <= t * deformation.radius_at(w / nw) + band

    hi = 1.0
    doublings = 0
    while not inside(hi):
        hi *= 2.0
        doublings += 1
        if doublings > 60:
            return INF
    lo = 0.0 if doublings == 0 else hi / 2.0
    for _ in range(200):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if inside(mid):
            hi = mid
        else:
            lo = mid
    return hi


def sup_ratio_oracle(
    cone: Cone,
    a,
    b,
    tol: float = 1e-7,
    check: bool = True,
    max_doublings: int = 60,
    max_bisections: int = 200,
    member_tol: Optional[float] = None,
    detail: Optional[dict] = None,
) -> float:
    """Bisection on ``lam`` over ``member(cone, lam*b - a)``.

    Independent of the closed forms in :func:`sup_ratio`; serves as their
    oracle.  The upper bracket doubles until membership holds (reporting
    infinity past ``2**max_doublings``), then the bracket shrinks to the
    relative width ``tol``.  When a ``detail`` dict is supplied it records
    whether an infinite answer was proved (zero denominator) or only
    reached the doubling cap.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    cone.check_dim(a.shape[0])
    if check:
        _require_member(cone, a, RANK_TOL, "a")
        _require_member(cone, b, RANK_TOL, "b")
    if _is_zero(a):
        return 0.0
    if _is_zero(b):
        if detail is not None:
            detail["reason"] = "zero_denominator"
        return INF
    mtol = member_tol if member_tol is not None else max(tol * 1e-2, 1e-10)

    hi = 1.0
    doublings = 0
    while not member(cone, hi * b - a, mtol):
        hi *= 2.0
        doublings += 1
        if doublings > max_doublings:
            if detail is not None:
                detail["reason"] = "doubling_cap_reached"
                detail["doublings"] = doublings
            return INF
    # Relative membership tolerances absorb any fixed deficit once lam is of
    # order 1/mtol, so a bracket that large is indistinguishable from an
    # unbounded ratio and is reported as such.
    if hi >= 0.1 / mtol:
        if detail is not None:
            detail["reason"] = "tolerance_saturated"
            detail["doublings"] = doublings
        return INF
    lo = 0.0 if doublings == 0 else hi / 2.0
    for _ in range(max_bisections):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if member(cone, mid * b - a, mtol):
            hi = mid
        else:
            lo = mid
    if detail is not None:
        detail["reason"] = "bracketed"
        detail["doublings"] = doublings
    return hi


def inf_ratio(cone: Cone, a, b, tol: float = RANK_TOL, check: bool = True) -> float:
    """inf(a/b) = sup{lam : lam*b <= a} = 1 / sup(b/a), with 1/inf = 0."""
    s = sup_ratio(cone, b, a, tol=tol, check=check)
    if s == INF:
        return 0.0
    if s == 0.0:
        return INF
    return 1.0 / s


def hilbert_distance(cone: Cone, a, b, tol: float = RANK_TOL, check: bool = True) -> float:
    """Hilbert's projective metric ln[sup(a/b) * sup(b/a)].

    Conventions: h(0,0) = 0 and h(0,a) = h(a,0) = infinity for nonzero a.
    """
    a = as_hermitian(a)
    b = as_hermitian(b)
    za, zb = _is_zero(a), _is_zero(b)
    if za and zb:
        return 0.0
    if za or zb:
        return INF
    s_ab = sup_ratio(cone, a, b, tol=tol, check=check)
    if s_ab == INF:
        return INF
    s_ba = sup_ratio(cone, b, a, tol=tol, check=False)
    if s_ba == INF:
        return INF
    return max(0.0, math.log(s_ab) + math.log(s_ba))


def oscillation(cone: Cone, a, b, tol: float = RANK_TOL, check: bool = True) -> float:
    """osc(a/b) = sup(a/b) - inf(a/b); infinite when the sup is."""
    if _is_zero(as_hermitian(b)):
        raise ValueError("oscillation requires b != 0")
    s = sup_ratio(cone, a, b, tol=tol, check=check)
    if s == INF:
        return INF
    i = inf_ratio(cone, a, b, tol=tol, check=False)
    return s - i


def dual_cone(cone: Cone) -> Cone:
    """Dual w.r.t. the trace inner product (psd and ppt are self-dual)."""
    if cone.kind == PSD:
        return cone
    if cone.kind == PPT:
        return cone
    if cone.kind == PPT_CAP_PSD:
        return Cone(CONV_PSD_PPT, shape=cone.shape)
    if cone.kind == CONV_PSD_PPT:
        return Cone(PPT_CAP_PSD, shape=cone.shape)
    raise ValueError(f"dual of {cone.kind} not available")
