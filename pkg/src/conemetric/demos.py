"""Worked-example reports: data hiding with Werner states, the psd/ppt
diameter crossover of depolarizing channels, the qubit cone-restriction
cases and the contraction-tightness witnesses."""

from __future__ import annotations

import math

import numpy as np

from . import qubit
from .basenorms import MeasurementSet, dist_norm
from .channels import birkhoff_coefficient, diameter_depolarizing
from .checks import base_norm_hilbert_chain
from .cones import Cone, inf_ratio, sup_ratio
from .linalg import partial_transpose
from .states import werner_state
from .synthesis import optimality_witness

DEMO_NAMES = ("data_hiding", "werner_diameters", "qubit_restriction", "optimality")


def data_hiding(d: int = 3, p1: float = 0.9, p2: float = 0.4) -> dict:
    """Distinguishability of two Werner states under shrinking measurement
    sets, with the sup/inf chain bounds for each associated cone.

    Restricted (ppt) measurements lose a factor of order d against
    unrestricted ones; the expected norms are 2(p1-p2), 4(p1-p2)/d and
    4(p1-p2)/(d+1)."""
    if not 0 <= p2 <= p1 <= 1:
        raise ValueError("need 0 <= p2 <= p1 <= 1")
    rho1 = werner_state(d, p1)
    rho2 = werner_state(d, p2)
    diff = rho1 - rho2
    gap = p1 - p2
    norms = {
        "m_plus": {
            "value": dist_norm(MeasurementSet.plus(), diff).value,
            "expected": 2.0 * gap,
        },
        "m_ppt": {
            "value": dist_norm(MeasurementSet.ppt(d, d), diff).value,
            "expected": 4.0 * gap / d,
        },
        "m_ppt_plus": {
            "value": dist_norm(MeasurementSet.ppt_plus(d, d), diff).value,
            "expected": 4.0 * gap / (d + 1),
        },
    }
    chains = {}
    for label, cone in (("psd", Cone.psd()), ("conv_psd_ppt", Cone.conv_psd_ppt(d, d))):
        reports = base_norm_hilbert_chain(cone, rho1, rho2)
        chains[label] = {
            "sup": reports[0].detail["sup"],
            "inf": reports[0].detail["inf"],
            "links": [
                {"context": r.context, "lhs": r.lhs, "rhs": r.rhs, "passed": r.passed}
                for r in reports
            ],
        }
    # The ppt-cone Hilbert distance needs both states inside the ppt cone.
    ppt_defined = p2 >= 0.5
    if ppt_defined:
        cone = Cone.ppt(d, d)
        chains["ppt"] = {
            "sup": sup_ratio(cone, rho1, rho2),
            "inf": inf_ratio(cone, rho1, rho2),
        }
    return {
        "d": d,
        "p1": p1,
        "p2": p2,
        "norms": norms,
        "chain_bounds": chains,
        "ppt_cone_distance_defined": ppt_defined,
    }


def werner_diameters(d: int = 3, p: float = 0.5, qs=None) -> dict:
    """Projective diameters of depolarization towards a Werner state, w.r.t.
    the psd and ppt cones, scanned over the mixing parameter.

    The ordering reverses across q = (d+1)/(2d), where the fixed point is
    the maximally mixed state and both diameters coincide."""
    if d < 3:
        raise ValueError("the eigenvalue-degeneracy analysis needs d >= 3")
    q_star = (d + 1) / (2.0 * d)
    if qs is None:
        qs = sorted({0.5, 0.55, 0.6, q_star, 0.75, 0.85, 1.0})
    rows = []
    for q in qs:
        sigma = werner_state(d, q)
        if not np.all(np.linalg.eigvalsh(partial_transpose(sigma, d, d)) > -1e-12):
            continue
        est_psd = diameter_depolarizing(p, sigma, Cone.psd())
        est_ppt = diameter_depolarizing(p, sigma, Cone.ppt(d, d))
        if est_psd.exact and est_ppt.exact:
            order = "psd < ppt" if est_psd.lower < est_ppt.lower - 1e-9 else (
                "psd > ppt" if est_psd.lower > est_ppt.lower + 1e-9 else "equal")
        else:
            # Below the crossover the ppt bound is not exact; its lower bound
            # already decides the ordering.
            order = "psd < ppt" if est_psd.upper < est_ppt.lower - 1e-9 else "undecided"
        rows.append({
            "q": q,
            "psd_lower": est_psd.lower, "psd_upper": est_psd.upper, "psd_exact": est_psd.exact,
            "ppt_lower": est_ppt.lower, "ppt_upper": est_ppt.upper, "ppt_exact": est_ppt.exact,
            "order": order,
        })
    return {"d": d, "p": p, "crossover_q": q_star, "rows": rows}


def qubit_restriction(n_samples: int = 40, seed: int = 3) -> dict:
    """All three cone-restriction cases of the qubit appendix."""
    return {
        "spherical_unital": qubit.restriction_demo("spherical_unital", n_samples, seed),
        "spherical_nonunital": qubit.restriction_demo("spherical_nonunital", n_samples, seed),
        "ellipsoid": qubit.restriction_demo("ellipsoid", n_samples, seed),
    }


def optimality(deltas=(0.5, 1.0, 2.0)) -> dict:
    """Tightness of the contraction coefficients: witness channels whose
    measured negativity and base-norm ratios meet the closed forms."""
    rows = []
    for delta in deltas:
        equal = optimality_witness(delta, 1.0, 1.0)
        lam1 = 0.999 * math.exp(delta)
        extreme = optimality_witness(delta, lam1, 1.0)
        rows.append({
            "delta": delta,
            "negativity_ratio_at_equal_weights": equal.negativity_ratio,
            "tanh_quarter": birkhoff_coefficient(delta),
            "base_norm_ratio_near_limit": extreme.base_norm_ratio,
            "tanh_half": math.tanh(delta / 2.0),
        })
    return {"rows": rows}


def run_demo(name: str, **kwargs) -> dict:
    if name == "data_hiding":
        return data_hiding(**kwargs)
    if name == "werner_diameters":
        return werner_diameters(**kwargs)
    if name == "qubit_restriction":
        return qubit_restriction(**kwargs)
    if name == "optimality":
        return optimality(**kwargs)
    raise ValueError(f"unknown demo {name!r}; available: {', '.join(DEMO_NAMES)}")
