"""Constructive synthesis of probabilistic operations mapping one pair of
states onto another, the decision criterion (Hilbert-distance contraction),
the trace-preserving instrument completion, and the tightness witnesses for
the contraction coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channels import Channel, from_apply, to_choi
from .cones import Cone, hilbert_distance, inf_ratio, sup_ratio
from .linalg import (
    RANK_TOL,
    as_hermitian,
    eig_hermitian,
    op_norm,
    psd_check,
    psd_sqrt,
    support_contained,
)

INF = float("inf")
_PSD = Cone.psd()


def support_compatible(rho1, rho2, rho1p, rho2p, tol: float = RANK_TOL) -> bool:
    """Support implications a positive map transports: an inclusion between
    the input supports must reappear between the output supports."""
    rho1, rho2 = as_hermitian(rho1), as_hermitian(rho2)
    rho1p, rho2p = as_hermitian(rho1p), as_hermitian(rho2p)
    if support_contained(rho1, rho2, tol) and not support_contained(rho1p, rho2p, tol):
        return False
    if support_contained(rho2, rho1, tol) and not support_contained(rho2p, rho1p, tol):
        return False
    return True


@dataclass
class FeasibilityCheck:
    feasible: bool
    reason: str
    h_in: float
    h_out: float


def feasible(rho1, rho2, rho1p, rho2p, tol: float = 1e-9) -> FeasibilityCheck:
    """A completely positive map with T(rho_i) = p_i rho_i' exists iff the
    supports are compatible and the Hilbert distance does not increase."""
    if not support_compatible(rho1, rho2, rho1p, rho2p):
        h_in = hilbert_distance(_PSD, rho1, rho2, check=False)
        h_out = hilbert_distance(_PSD, rho1p, rho2p, check=False)
        return FeasibilityCheck(False, "incompatible supports", h_in, h_out)
    h_in = hilbert_distance(_PSD, rho1, rho2, check=False)
    h_out = hilbert_distance(_PSD, rho1p, rho2p, check=False)
    if h_out <= h_in + tol or math.isinf(h_in):
        return FeasibilityCheck(True, "", h_in, h_out)
    return FeasibilityCheck(False, "hilbert distance would increase", h_in, h_out)


@dataclass
class SynthesisResult:
    feasible: bool
    reason: str = ""
    channel: Optional[Channel] = None
    p1: Optional[float] = None
    p2: Optional[float] = None
    branch: str = ""
    branch_margin: float = 0.0
    choi_min_eigenvalue: Optional[float] = None
    residuals: tuple[float, float] = (0.0, 0.0)
    h_in: float = 0.0
    h_out: float = 0.0
    detail: dict = field(default_factory=dict)


def _kernel_vector(null_of, weight, rank_tol: float = RANK_TOL) -> tuple[np.ndarray, float]:
    """Eigenvector of ``null_of`` with (numerically) vanishing eigenvalue
    maximizing its expectation of ``weight``; returns (vector, margin)."""
    values, vectors = eig_hermitian(null_of)
    lam_max = float(np.max(np.abs(values))) if values.size else 0.0
    threshold = max(rank_tol * lam_max, 1e4 * np.finfo(float).eps * max(lam_max, 1.0))
    candidates = [vectors[:, i] for i in range(len(values)) if values[i] <= threshold]
    if not candidates:
        candidates = [vectors[:, 0]]
    best, margin = None, -1.0
    for psi in candidates:
        w = float((psi.conj() @ (weight @ psi)).real)
        if w > margin:
            best, margin = psi, w
    return best, margin


def _rank_one_expectation_map(terms: list[tuple[np.ndarray, np.ndarray]], in_dim: int, out_dim: int,
                              label: str) -> Channel:
    """Channel rho -> sum_k <psi_k|rho|psi_k> X_k (completely positive for
    psd X_k)."""

    def fn(H):
        out = np.zeros((out_dim, out_dim), dtype=complex)
        for psi, X in terms:
            out += float((psi.conj() @ (H @ psi)).real) * X
        return out

    return from_apply(fn, in_dim, out_dim, label=label)


def synthesize(rho1, rho2, rho1p, rho2p, rank_tol: float = RANK_TOL) -> SynthesisResult:
    """Construct a completely positive map with T(rho_i) = p_i rho_i'.

    Follows the constructive argument behind the feasibility criterion:
    after an optional rescaling of the first output, the positive operators
    u = M rho2 - rho1 and v = rho1 - m rho2 have kernel vectors psi, phi
    off the kernel of rho2, from which the rank-one expectation map is
    assembled.  Disjoint-support inputs use their mutual kernel vectors
    directly.  Refuses infeasible instances.
    """
    rho1, rho2 = as_hermitian(rho1), as_hermitian(rho2)
    rho1p, rho2p = as_hermitian(rho1p), as_hermitian(rho2p)
    check = feasible(rho1, rho2, rho1p, rho2p)
    if not check.feasible:
        return SynthesisResult(False, reason=check.reason, h_in=check.h_in, h_out=check.h_out)
    out_dim = rho1p.shape[0]
    in_dim = rho1.shape[0]

    incl12 = support_contained(rho1, rho2, rank_tol)
    incl21 = support_contained(rho2, rho1, rank_tol)

    if op_norm(rho1 - rho2) <= 1e-12 * (1.0 + op_norm(rho1)):
        # Linearly dependent inputs: h = 0 forced the outputs together too.
        T = _rank_one_expectation_map(
            [(np.eye(in_dim)[:, i], rho1p) for i in range(in_dim)], in_dim, out_dim,
            label="constant synthesis")
        result = _certify(T, rho1, rho2, rho1p, rho2p, 1.0, 1.0, "linear_dependence", 0.0, check)
        return result

    if not incl12 and not incl21:
        psi, m_psi = _kernel_vector(rho1, rho2, rank_tol)
        phi, m_phi = _kernel_vector(rho2, rho1, rank_tol)
        if m_psi <= 1e-12 or m_phi <= 1e-12:
            return SynthesisResult(False, reason="degenerate kernel-vector search (unexpected)",
                                   h_in=check.h_in, h_out=check.h_out)
        T = _rank_one_expectation_map([(phi, rho1p), (psi, rho2p)], in_dim, out_dim,
                                      label="disjoint-support synthesis")
        p1 = float((phi.conj() @ (rho1 @ phi)).real)
        p2 = float((psi.conj() @ (rho2 @ psi)).real)
        return _certify(T, rho1, rho2, rho1p, rho2p, p1, p2, "no_inclusion",
                        min(m_psi, m_phi), check)

    swap = incl21 and not incl12
    a1, a2 = (rho2, rho1) if swap else (rho1, rho2)
    b1, b2 = (rho2p, rho1p) if swap else (rho1p, rho2p)

    M = sup_ratio(_PSD, a1, a2, check=False)
    m = inf_ratio(_PSD, a1, a2, check=False)
    Mp = sup_ratio(_PSD, b1, b2, check=False)
    mp = inf_ratio(_PSD, b1, b2, check=False)
    if math.isinf(Mp):
        return SynthesisResult(False, reason="output supports violate compatibility",
                               h_in=check.h_in, h_out=check.h_out)
    if m > 0.0 and mp <= 0.0:
        return SynthesisResult(False, reason="output distance infinite while input finite",
                               h_in=check.h_in, h_out=check.h_out)

    # Rescale the first output so that M' <= M and m' >= m; identity when the
    # constraints already hold, geometric midpoint of the valid interval
    # otherwise (any interior point works; the midpoint balances conditioning).
    if Mp <= M and mp >= m:
        c = 1.0
    else:
        hi = M / Mp
        lo = m / mp if mp > 0.0 else 0.0
        if lo > hi + 1e-12:
            return SynthesisResult(False, reason="rescaling interval empty (unexpected)",
                                   h_in=check.h_in, h_out=check.h_out)
        c = math.sqrt(lo * hi) if lo > 0.0 else 0.5 * hi
    b1s = c * b1

    u = M * a2 - a1
    v_op = a1 - m * a2
    A = M * b2 - b1s          # image of u under the pair map
    B = b1s - m * b2          # image of v under the pair map
    psi, m_psi = _kernel_vector(v_op, u, rank_tol)
    phi, m_phi = _kernel_vector(u, v_op, rank_tol)
    if m_psi <= 1e-12 * (1.0 + op_norm(u)) or m_phi <= 1e-12 * (1.0 + op_norm(v_op)):
        return SynthesisResult(False, reason="degenerate kernel-vector search (unexpected)",
                               h_in=check.h_in, h_out=check.h_out)
    terms = [(psi, A / m_psi), (phi, B / m_phi)]
    T = _rank_one_expectation_map(terms, in_dim, out_dim, label="pair synthesis")
    pa, pb = c, 1.0  # T(a1) = c*b1, T(a2) = b2
    p1, p2 = (pb, pa) if swap else (pa, pb)
    return _certify(T, rho1, rho2, rho1p, rho2p, p1, p2,
                    "support_inclusion_swapped" if swap else "support_inclusion",
                    min(m_psi, m_phi), check)


def _certify(T: Channel, rho1, rho2, rho1p, rho2p, p1: float, p2: float,
             branch: str, margin: float, check: FeasibilityCheck) -> SynthesisResult:
    choi_min = float(np.min(np.linalg.eigvalsh(to_choi(T))))
    r1 = op_norm(T.apply(rho1) - p1 * rho1p)
    r2 = op_norm(T.apply(rho2) - p2 * rho2p)
    return SynthesisResult(
        True,
        channel=T,
        p1=p1,
        p2=p2,
        branch=branch,
        branch_margin=margin,
        choi_min_eigenvalue=choi_min,
        residuals=(r1, r2),
        h_in=check.h_in,
        h_out=check.h_out,
    )


def complete_to_instrument(T: Channel) -> Channel:
    """Extend a completely positive trace-non-increasing-after-rescaling map
    to a trace-preserving instrument with an ancillary flag qubit.

    The flag-1 branch equals c*T with c = 1/||T*(1)||_inf; the flag-0 branch
    absorbs the remaining weight (as B rho B with B = sqrt(1 - c T*(1)) for
    matching dimensions, as a trace dump onto the maximally mixed state when
    the output dimension differs).
    """
    if not psd_check(to_choi(T), 1e-9):
        raise ValueError("instrument completion requires a completely positive map")
    t_star_eye = T.adjoint().apply(np.eye(T.out_dim))
    nrm = op_norm(t_star_eye)
    if nrm <= 1e-14:
        raise ValueError("zero map cannot be completed to an instrument")
    c = 1.0 / nrm
    remainder = np.eye(T.in_dim) - c * t_star_eye
    flag1 = np.zeros((2, 2), dtype=complex)
    flag1[1, 1] = 1.0
    flag0 = np.zeros((2, 2), dtype=complex)
    flag0[0, 0] = 1.0
    if T.in_dim == T.out_dim:
        B = psd_sqrt(remainder)

        def fn(H):
            return np.kron(c * T.apply(H), flag1) + np.kron(B @ H @ B, flag0)
    else:
        mixed = np.eye(T.out_dim, dtype=complex) / T.out_dim

        def fn(H):
            weight = float(np.trace(remainder @ H).real)
            return np.kron(c * T.apply(H), flag1) + np.kron(weight * mixed, flag0)

    return from_apply(fn, T.in_dim, 2 * T.out_dim,
                      label=f"instrument({T.label})" if T.label else "instrument")


def instrument_success_branch(T_tilde: Channel, H) -> np.ndarray:
    """Flag-1 block of the instrument output (the rescaled original map)."""
    out = T_tilde.apply(H)
    d = T_tilde.out_dim // 2
    return out.reshape(d, 2, d, 2)[:, 1, :, 1]


@dataclass
class OptimalityWitness:
    channel: Channel
    v: np.ndarray
    diameter: float
    negativity_ratio: float
    negativity_ratio_closed_form: float
    base_norm_ratio: float
    base_norm_ratio_closed_form: float


def optimality_witness(delta: float, lam1: float, lam2: float,
                       in_dim: int = 2, out_dim: int = 2) -> OptimalityWitness:
    """Base-preserving map with prescribed projective diameter whose image is
    a line segment, saturating the negativity and base-norm contraction
    bounds.

    Requires delta > 0 and lam1 >= lam2 > exp(-delta)*lam1.  At lam1 = lam2
    the negativity contraction ratio equals tanh(delta/4); as lam1/lam2
    approaches exp(delta) the base-norm ratio approaches tanh(delta/2).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not (lam1 >= lam2 > math.exp(-delta) * lam1 > 0):
        raise ValueError("need lam1 >= lam2 > exp(-delta)*lam1 > 0")
    if in_dim < 2 or out_dim < 2:
        raise ValueError("dimensions must be at least 2")
    ratio = math.sqrt(lam2 / lam1)
    m = math.exp(-delta / 2.0) * ratio
    M = math.exp(delta / 2.0) * ratio
    mu2 = (M - 1.0) / (M - m)
    mu1 = m * mu2

    b1p = np.zeros((out_dim, out_dim), dtype=complex)
    b1p[0, 0] = 1.0
    b2p = np.zeros((out_dim, out_dim), dtype=complex)
    b2p[1, 1] = 1.0
    c1p = (1.0 - mu1) * b1p + mu1 * b2p
    c2p = (1.0 - mu2) * b1p + mu2 * b2p

    def fn(H):
        w = float(H[0, 0].real)
        return w * c1p + (float(np.trace(H).real) - w) * c2p

    T = from_apply(fn, in_dim, out_dim, label=f"segment witness (delta={delta})")

    v = np.zeros((in_dim, in_dim), dtype=complex)
    v[0, 0] = lam1
    v[1, 1] = -lam2
    image = T.apply(v)
    values = np.linalg.eigvalsh(image)
    neg_ratio = float(np.sum(np.maximum(-values, 0.0))) / lam2
    base_ratio = float(np.sum(np.abs(values))) / (lam1 + lam2)

    e_half = math.exp(delta / 2.0)
    neg_cf = (e_half - math.sqrt(lam1 / lam2)) ** 2 / (math.exp(delta) - 1.0)
    q = (lam1 / lam2) ** 0.25
    # The hyperbolic factor must be sinh for the closed form to agree with
    # the construction (it then reproduces tanh(delta/4) at lam1 = lam2 and
    # tanh(delta/2) in the lam1/lam2 -> e^delta limit).
    base_cf = math.tanh(delta / 2.0) - (2.0 / math.sinh(delta)) * (
        math.sqrt(lam1 * lam2) / (lam1 + lam2)
    ) * ((math.exp(delta / 4.0) - math.exp(-delta / 4.0)) ** 2 - (q - 1.0 / q) ** 2)

    if abs(neg_ratio - neg_cf) > 1e-8:
        raise AssertionError(
            f"negativity ratio {neg_ratio} deviates from closed form {neg_cf}")
    if abs(base_ratio - base_cf) > 1e-8:
        raise AssertionError(
            f"base-norm ratio {base_ratio} deviates from closed form {base_cf}")
    diameter = hilbert_distance(_PSD, c1p, c2p, check=False)
    return OptimalityWitness(T, v, diameter, neg_ratio, neg_cf, base_ratio, base_cf)
