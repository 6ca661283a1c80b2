"""Verifiers for the contraction and distinguishability inequalities.

Each function evaluates both sides of one bound and returns CheckReports.
Soundness labeling: when the projective diameter enters on the large side,
only a closed form yields a CERTIFIED comparison; a sampled lower bound
weakens the claim and the report is ADVISORY.  Conjecture probes are
EXPLORATORY and never fail a run.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from . import cones as cones_mod
from .basenorms import MeasurementSet, base_norm, dist_norm, negativity
from .channels import Channel, DiameterEstimate, best_diameter, birkhoff_coefficient, is_positive_sampled, is_trace_preserving
from .cones import Cone, hilbert_distance, inf_ratio, sup_ratio
from .linalg import (
    as_hermitian,
    eig_hermitian,
    op_norm,
    partial_transpose,
    psd_check,
    psd_sqrt,
    trace_norm,
)
from .report import ADVISORY, CERTIFIED, EXPLORATORY, NOT_APPLICABLE, CheckReport

INF = float("inf")


def resolve_diameter(T: Channel, cone: Cone, n_samples: int = 48, seed: int = 0,
                     n_refine: int = 3) -> tuple[DiameterEstimate, bool]:
    """Best diameter estimate plus whether it certifies upper-side use."""
    est = best_diameter(T, cone, n_samples=n_samples, seed=seed, n_refine=n_refine)
    return est, est.exact


def _require_base_preserving(T: Channel, seed: int = 0) -> None:
    if not is_trace_preserving(T) or not is_positive_sampled(T, n_samples=16, seed=seed):
        raise ValueError("check requires a base-preserving (positive, trace-preserving) map")


def base_norm_hilbert_chain(cone: Cone, b1, b2, abs_tol: float = 1e-9) -> list[CheckReport]:
    """Chain linking the base-norm distance of two base points to their
    Hilbert distance:

        ||b1 - b2||/2 <= (M-1)(1-m)/(M-m) <= 1/(1+m) - 1/(1+M) <= tanh(h/4)

    with M and m the sup and inf ratios.  Infinite-h links degenerate to
    their finite limits.
    """
    b1 = as_hermitian(b1)
    b2 = as_hermitian(b2)
    if abs(np.trace(b1).real - 1.0) > 1e-9 or abs(np.trace(b2).real - 1.0) > 1e-9:
        raise ValueError("chain inputs must be normalized cone elements")
    sup = sup_ratio(cone, b1, b2)
    inf = inf_ratio(cone, b1, b2, check=False)
    half_norm = 0.5 * base_norm(cone, b1 - b2).value

    if math.isinf(sup):
        link1 = 1.0 - inf
    elif sup - inf <= 1e-14:
        link1 = 0.0
    else:
        link1 = (sup - 1.0) * (1.0 - inf) / (sup - inf)
    link2 = 1.0 / (1.0 + inf) - (0.0 if math.isinf(sup) else 1.0 / (1.0 + sup))
    h = INF if (math.isinf(sup) or inf <= 0.0) else math.log(sup / inf)
    link3 = birkhoff_coefficient(h)
    tolerances = {"abs_tol": abs_tol}
    return [
        CheckReport("chain: half base-norm distance <= sup/inf bound",
                    half_norm, link1, abs_tol, CERTIFIED, tolerances,
                    detail={"sup": sup, "inf": inf}),
        CheckReport("chain: sup/inf bound <= resolvent bound",
                    link1, link2, abs_tol, CERTIFIED, tolerances),
        CheckReport("chain: resolvent bound <= tanh(h/4)",
                    link2, link3, abs_tol, CERTIFIED, tolerances,
                    detail={"h": h}),
    ]


def negativity_contraction_check(
    T: Channel,
    cone: Cone,
    cone_out: Optional[Cone],
    v,
    abs_tol: float = 1e-9,
    seed: int = 0,
) -> CheckReport:
    """Negativity contraction under a base-preserving map:
    N(T(v)) <= N(v) tanh(diameter/4)."""
    cone_out = cone_out or cone
    v = as_hermitian(v)
    if np.trace(v).real < -1e-10:
        raise ValueError("check requires trace(v) >= 0")
    _require_base_preserving(T, seed=seed)
    est, certified = resolve_diameter(T, cone_out, seed=seed)
    lhs = negativity(cone_out, T.apply(v))
    rhs = negativity(cone, v) * birkhoff_coefficient(est.value)
    return CheckReport(
        "negativity contraction", lhs, rhs, abs_tol,
        CERTIFIED if certified else ADVISORY,
        detail={"diameter": est.value, "diameter_method": est.method},
    )


def base_norm_distance_contraction_check(
    T: Channel,
    cone: Cone,
    cone_out: Optional[Cone],
    v1,
    v2,
    abs_tol: float = 1e-9,
    seed: int = 0,
) -> CheckReport:
    """Contraction of the base-norm distance:
    ||T(v1 - v2)|| <= ||v1 - v2|| tanh(diameter/4) for equal traces."""
    cone_out = cone_out or cone
    v1 = as_hermitian(v1)
    v2 = as_hermitian(v2)
    if abs(np.trace(v1).real - np.trace(v2).real) > 1e-9:
        raise ValueError("check requires equal traces")
    _require_base_preserving(T, seed=seed)
    est, certified = resolve_diameter(T, cone_out, seed=seed)
    lhs = base_norm(cone_out, T.apply(v1 - v2)).value
    rhs = base_norm(cone, v1 - v2).value * birkhoff_coefficient(est.value)
    return CheckReport(
        "base-norm distance contraction", lhs, rhs, abs_tol,
        CERTIFIED if certified else ADVISORY,
        detail={"diameter": est.value},
    )


def base_norm_contraction_check(
    T: Channel,
    cone: Cone,
    cone_out: Optional[Cone],
    v,
    abs_tol: float = 1e-9,
    seed: int = 0,
) -> list[CheckReport]:
    """Base-norm contraction with the doubled-argument coefficient:
    if T(v) stays outside the output cone, ||T(v)|| <= ||v|| tanh(diameter/2),
    equivalently the logarithmic negativity drops by at least
    -ln tanh(diameter/2)."""
    cone_out = cone_out or cone
    v = as_hermitian(v)
    if np.trace(v).real < -1e-10:
        raise ValueError("check requires trace(v) >= 0")
    _require_base_preserving(T, seed=seed)
    image = T.apply(v)
    if cones_mod.member(cone_out, image, 1e-9):
        return [CheckReport("base-norm contraction", 0.0, INF, abs_tol, NOT_APPLICABLE,
                            detail={"reason": "image lies in the output cone"})]
    est, certified = resolve_diameter(T, cone_out, seed=seed)
    coeff = math.tanh(est.value / 2.0) if math.isfinite(est.value) else 1.0
    status = CERTIFIED if certified else ADVISORY
    lhs = base_norm(cone_out, image).value
    rhs = base_norm(cone, v).value * coeff
    reports = [CheckReport("base-norm contraction", lhs, rhs, abs_tol, status,
                           detail={"diameter": est.value, "coefficient": coeff})]
    if lhs > 0 and rhs > 0 and coeff > 0:
        reports.append(CheckReport(
            "log-negativity decrement >= -ln tanh(diameter/2)",
            -math.log(coeff),
            math.log(base_norm(cone, v).value) - math.log(lhs),
            abs_tol, status))
    return reports


def finite_time_cone_entry_check(
    T: Channel,
    cone: Cone,
    v,
    abs_tol: float = 1e-9,
    seed: int = 0,
    max_steps: int = 512,
) -> list[CheckReport]:
    """Finite-time entry into the cone under repeated application:
    n >= ln||v|| / (-ln tanh(diameter/2)) steps suffice, as does the weaker
    n >= (e^diameter / 2) ln||v||.  Also records the empirical entry step."""
    v = as_hermitian(v)
    if abs(np.trace(v).real - 1.0) > 1e-9:
        raise ValueError("check requires trace(v) = 1")
    _require_base_preserving(T, seed=seed)
    est, certified = resolve_diameter(T, cone, seed=seed)
    if not (certified and math.isfinite(est.value)):
        return [CheckReport("finite-time cone entry", 0.0, INF, abs_tol, NOT_APPLICABLE,
                            detail={"reason": "needs a finite closed-form diameter"})]
    norm_v = base_norm(cone, v).value
    coeff = math.tanh(est.value / 2.0)
    n1 = 0.0 if norm_v <= 1.0 else math.log(norm_v) / (-math.log(coeff))
    n2 = 0.0 if norm_v <= 1.0 else 0.5 * math.exp(est.value) * math.log(norm_v)
    n_entry = math.ceil(n1)
    state = v.copy()
    empirical = None
    for k in range(max_steps + 1):
        if cones_mod.member(cone, state, 1e-9):
            empirical = k
            break
        state = T.apply(state)
    image = v.copy()
    for _ in range(n_entry):
        image = T.apply(image)
    reports = [
        CheckReport("cone entry: weaker bound dominates", n1, n2, abs_tol, CERTIFIED,
                    detail={"n1": n1, "n2": n2}),
        CheckReport(
            "cone entry at ceil(n1)",
            0.0,
            1.0 if cones_mod.member(cone, image, 1e-9) else -1.0,
            abs_tol,
            CERTIFIED,
            detail={"n": n_entry, "empirical_entry": empirical},
        ),
    ]
    return reports


def ensemble_negativity_check(
    instruments: Sequence[tuple[Channel, Cone]],
    cone: Cone,
    rho,
    abs_tol: float = 1e-9,
    seed: int = 0,
    diameter_samples: int = 16,
) -> list[CheckReport]:
    """Averaged negativity contraction for a collection of cone-preserving
    operations with total success probability at most one.

    For normalized state inputs (success probabilities summing to one) the
    plain entanglement-monotone variants for the base norm and its logarithm
    are verified as well; for general trace-positive inputs those averages
    are not monotone and the rows are skipped."""
    rho = as_hermitian(rho)
    if np.trace(rho).real < -1e-10:
        raise ValueError("check requires trace(rho) >= 0")
    total = sum(t.adjoint().apply(np.eye(t.out_dim)) for t, _ in instruments)
    if not psd_check(np.eye(rho.shape[0]) - total, 1e-8):
        raise ValueError("instrument success probabilities exceed one")
    probs, lhs_neg, lhs_norm, lhs_logneg = [], 0.0, 0.0, 0.0
    deltas, certified = [], True
    for T, cone_i in instruments:
        image = T.apply(rho)
        p = float(np.trace(image).real)
        if p < -1e-10:
            return [CheckReport("ensemble negativity contraction", 0.0, INF, abs_tol,
                                NOT_APPLICABLE, detail={"reason": "negative branch probability"})]
        probs.append(p)
        est, cert = resolve_diameter(T, cone_i, n_samples=diameter_samples, seed=seed, n_refine=1)
        deltas.append(est.value)
        certified = certified and cert
        if p <= 1e-12:
            continue
        lhs_neg += negativity(cone_i, image)
        norm_i = base_norm(cone_i, image).value
        lhs_norm += norm_i
        lhs_logneg += p * math.log(norm_i / p)
    status = CERTIFIED if certified else ADVISORY
    rho_neg = negativity(cone, rho)
    rho_norm = base_norm(cone, rho).value
    coeff = birkhoff_coefficient(max(deltas)) if deltas else 0.0
    reports = [
        CheckReport("ensemble negativity contraction", lhs_neg, rho_neg * coeff,
                    abs_tol, status, detail={"probabilities": probs, "diameters": deltas}),
    ]
    is_state = psd_check(rho, 1e-9) and abs(np.trace(rho).real - 1.0) <= 1e-9
    if is_state:
        reports.append(CheckReport(
            "ensemble base-norm monotone", lhs_norm, rho_norm, abs_tol, CERTIFIED))
        reports.append(CheckReport(
            "ensemble log-negativity monotone", lhs_logneg,
            math.log(rho_norm) if rho_norm > 0 else -INF, abs_tol, CERTIFIED))
    return reports


def _sample_measurement_extreme(M: MeasurementSet, dim: int, rng: np.random.Generator) -> np.ndarray:
    """A random extreme-ish effect of the measurement set."""
    H = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    _, vectors = eig_hermitian(0.5 * (H + H.conj().T))
    k = int(rng.integers(1, dim))
    proj = vectors[:, :k] @ vectors[:, :k].conj().T
    if M.kind == "m_plus":
        return proj
    if M.kind == "m_ppt":
        return partial_transpose(proj, *M.shape)
    # intersection family: blend the projector into the doubly-bounded set
    E = 0.5 * proj + 0.25 * np.eye(dim)
    return E


def measurement_member(M: MeasurementSet, E, tol: float = 1e-9) -> bool:
    E = as_hermitian(E)
    eye = np.eye(E.shape[0])
    if M.kind in ("m_plus", "m_ppt_plus"):
        if not (psd_check(E, tol) and psd_check(eye - E, tol)):
            return False
    if M.kind in ("m_ppt", "m_ppt_plus"):
        Et = partial_transpose(E, *M.shape)
        if not (psd_check(Et, tol) and psd_check(eye - Et, tol)):
            return False
    return True


def dist_norm_contraction_check(
    T: Channel,
    M: MeasurementSet,
    M_out: MeasurementSet,
    v1,
    v2,
    abs_tol: float = 1e-9,
    n_samples: int = 16,
    seed: int = 0,
) -> list[CheckReport]:
    """Distinguishability-norm contraction.

    (a) When the adjoint maps output effects into the input measurement set
    and preserves the trace functional, the norm cannot increase.
    (b) For a base-preserving map the Birkhoff coefficient w.r.t. the dual
    state cone enters (every supported measurement set is saturated)."""
    v1 = as_hermitian(v1)
    v2 = as_hermitian(v2)
    if abs(np.trace(v1).real - np.trace(v2).real) > 1e-9:
        raise ValueError("check requires equal traces")
    adj = T.adjoint()
    rng = np.random.default_rng(seed)
    adjoint_ok = op_norm(adj.apply(np.eye(T.out_dim)) - np.eye(T.in_dim)) <= 1e-9 * T.in_dim
    for _ in range(n_samples):
        E = _sample_measurement_extreme(M_out, T.out_dim, rng)
        if not measurement_member(M, adj.apply(E), tol=1e-8):
            adjoint_ok = False
            break
    reports = []
    lhs = dist_norm(M_out, T.apply(v1) - T.apply(v2)).value
    rhs_plain = dist_norm(M, v1 - v2).value
    if adjoint_ok:
        reports.append(CheckReport(
            "distinguishability norm non-increase", lhs, rhs_plain, abs_tol, CERTIFIED))
    else:
        reports.append(CheckReport(
            "distinguishability norm non-increase", 0.0, INF, abs_tol, NOT_APPLICABLE,
            detail={"reason": "adjoint does not map sampled effects into the input set"}))
    try:
        _require_base_preserving(T, seed=seed)
    except ValueError:
        reports.append(CheckReport(
            "distinguishability norm contraction", 0.0, INF, abs_tol, NOT_APPLICABLE,
            detail={"reason": "map is not base-preserving"}))
        return reports
    cone_out = M_out.state_cone()
    est, certified = resolve_diameter(T, cone_out, seed=seed)
    rhs = rhs_plain * birkhoff_coefficient(est.value)
    reports.append(CheckReport(
        "distinguishability norm contraction", lhs, rhs, abs_tol,
        CERTIFIED if certified else ADVISORY,
        detail={"diameter": est.value, "cone": cone_out.kind}))
    return reports


def fidelity(rho1, rho2) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) of two states."""
    rho1 = as_hermitian(rho1)
    rho2 = as_hermitian(rho2)
    s = psd_sqrt(rho1)
    inner = s @ rho2 @ s
    values = np.linalg.eigvalsh(inner)
    return float(np.sum(np.sqrt(np.maximum(values, 0.0))))


def fidelity_bounds_check(rho1, rho2, abs_tol: float = 1e-9) -> list[CheckReport]:
    """Sandwich 1 - F <= ||rho1 - rho2||_1 / 2 <= sqrt(1 - F^2) <= tanh(h/4)."""
    rho1 = as_hermitian(rho1)
    rho2 = as_hermitian(rho2)
    F = fidelity(rho1, rho2)
    half_dist = 0.5 * trace_norm(rho1 - rho2)
    upper = math.sqrt(max(0.0, 1.0 - F * F))
    h = hilbert_distance(Cone.psd(), rho1, rho2, check=False)
    return [
        CheckReport("fidelity sandwich: 1 - F <= trace distance", 1.0 - F, half_dist, abs_tol, CERTIFIED),
        CheckReport("fidelity sandwich: trace distance <= sqrt(1 - F^2)", half_dist, upper, abs_tol, CERTIFIED),
        CheckReport("fidelity vs Hilbert metric: sqrt(1 - F^2) <= tanh(h/4)",
                    upper, birkhoff_coefficient(h), abs_tol, CERTIFIED, detail={"h": h, "F": F}),
    ]


def _power_on_support(values: np.ndarray, vectors: np.ndarray, s: float, tol: float = 1e-12) -> np.ndarray:
    lam_max = float(np.max(values)) if values.size else 0.0
    keep = values > tol * max(lam_max, 1e-300)
    powered = np.zeros_like(values)
    powered[keep] = values[keep] ** s
    return (vectors * powered) @ vectors.conj().T


def chernoff(rho1, rho2, grid: int = 64, tol: float = 1e-8) -> float:
    """Chernoff exponent -ln min_s tr(rho1^s rho2^{1-s}).

    Matrix powers act on the supports (zero eigenvalues contribute nothing
    at any positive power and drop out of the s -> 0 limit as well).  A
    coarse grid scan brackets the minimum before golden-section refinement.
    """
    rho1 = as_hermitian(rho1)
    rho2 = as_hermitian(rho2)
    v1, u1 = eig_hermitian(rho1)
    v2, u2 = eig_hermitian(rho2)

    def q(s: float) -> float:
        a = _power_on_support(v1, u1, s)
        b = _power_on_support(v2, u2, 1.0 - s)
        return float(np.trace(a @ b).real)

    ss = np.linspace(0.0, 1.0, grid + 1)
    qs = [q(s) for s in ss]
    k = int(np.argmin(qs))
    lo = ss[max(0, k - 1)]
    hi = ss[min(grid, k + 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - phi * (hi - lo)
    x2 = lo + phi * (hi - lo)
    f1, f2 = q(x1), q(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - phi * (hi - lo)
            f1 = q(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + phi * (hi - lo)
            f2 = q(x2)
    q_min = min(min(qs), f1, f2)
    if q_min <= 0.0:
        return INF
    return -math.log(q_min)


def chernoff_bound_check(rho1, rho2, abs_tol: float = 1e-9) -> CheckReport:
    """Chernoff exponent against half the Hilbert distance."""
    xi = chernoff(rho1, rho2)
    h = hilbert_distance(Cone.psd(), as_hermitian(rho1), as_hermitian(rho2), check=False)
    rhs = INF if math.isinf(h) else 0.5 * h
    return CheckReport("chernoff exponent <= h/2", xi, rhs, abs_tol, CERTIFIED,
                       detail={"h": h})


def conjecture_probe(rho1, rho2) -> CheckReport:
    """Exploratory probe of the conjectured strengthening
    sqrt(1 - q_min^2) <= tanh(h/4); negative slack is logged, not failed."""
    rho1 = as_hermitian(rho1)
    rho2 = as_hermitian(rho2)
    xi = chernoff(rho1, rho2)
    q_min = 0.0 if math.isinf(xi) else math.exp(-xi)
    lhs = math.sqrt(max(0.0, 1.0 - q_min * q_min))
    h = hilbert_distance(Cone.psd(), rho1, rho2, check=False)
    return CheckReport("conjecture probe: sqrt(1 - q_min^2) <= tanh(h/4)",
                       lhs, birkhoff_coefficient(h), 1e-9, EXPLORATORY,
                       detail={"h": h, "q_min": q_min})
