"""Closed forms on the Bloch ball: the qubit Hilbert metric, affine channel
representation, trace-norm contraction coefficient, unital diameters,
deformed-cone distances and the cone-restriction demonstrations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channels as channels_mod
from .channels import Channel, DiameterEstimate, diameter_sampled
from .cones import Cone, Deformation
from .linalg import as_hermitian
from .report import ADVISORY, CERTIFIED, CheckReport

INF = float("inf")

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def to_bloch(rho) -> np.ndarray:
    """Bloch vector of a qubit state rho = (I + r.sigma)/2."""
    rho = as_hermitian(rho)
    if rho.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if abs(np.trace(rho).real - 1.0) > 1e-9:
        raise ValueError("expected a normalized state")
    return np.array([np.trace(rho @ s).real for s in (_SX, _SY, _SZ)])


def from_bloch(r, as_state: bool = True) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if as_state and np.linalg.norm(r) > 1.0 + 1e-12:
        raise ValueError("Bloch vector outside the unit ball")
    return 0.5 * (np.eye(2, dtype=complex) + r[0] * _SX + r[1] * _SY + r[2] * _SZ)


def hilbert_qubit(r, t) -> float:
    """Hilbert distance of two qubit states from their Bloch vectors.

    ln[(1 - r.t + s)/(1 - r.t - s)] with s = sqrt((1 - r.t)^2 -
    (1 - r^2)(1 - t^2)); infinite when the denominator closes (boundary)."""
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.linalg.norm(r) > 1.0 + 1e-12 or np.linalg.norm(t) > 1.0 + 1e-12:
        raise ValueError("Bloch vectors must lie in the unit ball")
    if np.linalg.norm(r - t) <= 1e-15:
        return 0.0
    rt = float(r @ t)
    disc = (1.0 - rt) ** 2 - (1.0 - float(r @ r)) * (1.0 - float(t @ t))
    disc = max(disc, 0.0)
    s = math.sqrt(disc)
    den = 1.0 - rt - s
    num = 1.0 - rt + s
    if den <= 1e-300 * num:
        return INF
    return math.log(num / den)


@dataclass
class AffineQubitMap:
    """Action on Bloch vectors: r -> linear @ r + shift."""

    linear: np.ndarray  # 3x3
    shift: np.ndarray   # 3

    def __call__(self, r) -> np.ndarray:
        return self.linear @ np.asarray(r, dtype=float) + self.shift


def channel_to_affine(T: Channel) -> AffineQubitMap:
    """Affine Bloch representation of a trace-preserving qubit channel.

    In the Pauli basis the channel matrix has first row (1, 0, 0, 0); the
    remaining block is the linear part and the first column the shift."""
    if T.in_dim != 2 or T.out_dim != 2:
        raise ValueError("expected a qubit-to-qubit channel")
    M = T.matrix
    if np.max(np.abs(M[0, :] - np.array([1.0, 0.0, 0.0, 0.0]))) > 1e-10:
        raise ValueError("channel is not trace-preserving")
    return AffineQubitMap(M[1:, 1:].copy(), M[1:, 0].copy())


def affine_to_channel(affine: AffineQubitMap, label: str = "") -> Channel:
    M = np.zeros((4, 4))
    M[0, 0] = 1.0
    M[1:, 1:] = affine.linear
    M[1:, 0] = affine.shift
    return Channel(M, 2, 2, label=label)


def eta1(T: Channel) -> float:
    """Trace-norm contraction coefficient of a qubit channel: the largest
    singular value of the Bloch linear part."""
    affine = channel_to_affine(T)
    return float(np.linalg.svd(affine.linear, compute_uv=False)[0])


def unital_diameter(linear) -> float:
    """Projective diameter of a unital qubit channel: 2 ln((1+s)/(1-s)) with
    s the largest singular value of the Bloch matrix."""
    s = float(np.linalg.svd(np.asarray(linear, dtype=float), compute_uv=False)[0])
    if s >= 1.0:
        return INF
    if s == 0.0:
        return 0.0
    return 2.0 * math.log((1.0 + s) / (1.0 - s))


def unital_diameter_estimate(linear) -> DiameterEstimate:
    value = unital_diameter(linear)
    return DiameterEstimate(value, value, True, "qubit_unital")


def equality_case_report(T: Channel, n_samples: int = 48, seed: int = 0) -> CheckReport:
    """Qubit contraction dichotomy: eta1 <= tanh(diameter/4), with equality
    exactly for unital or constant channels.

    For unital and constant maps the diameter is a closed form and the check
    is certified.  Otherwise only a sampled diameter lower bound exists; the
    strict-gap assertion is then advisory."""
    affine = channel_to_affine(T)
    e1 = eta1(T)
    constant = float(np.max(np.abs(affine.linear))) <= 1e-12
    unital = float(np.linalg.norm(affine.shift)) <= 1e-10
    if constant or unital:
        delta = 0.0 if constant else unital_diameter(affine.linear)
        bound = channels_mod.birkhoff_coefficient(delta)
        report = CheckReport(
            "qubit equality case: eta1 = tanh(diameter/4)",
            abs(e1 - bound), 0.0, 1e-6, CERTIFIED,
            detail={"eta1": e1, "diameter": delta, "case": "constant" if constant else "unital"},
        )
        return report
    est = diameter_sampled(T, Cone.psd(), n_samples=n_samples, seed=seed)
    bound = channels_mod.birkhoff_coefficient(est.lower)
    return CheckReport(
        "qubit strict case: eta1 < tanh(diameter/4)",
        e1, bound, 1e-9, ADVISORY,
        detail={"eta1": e1, "diameter_lower": est.lower, "case": "non-unital"},
    )


def deformed_cone_distance_origin(deformation: Deformation, r) -> float:
    """Hilbert distance between a Bloch point and the origin inside a
    deformed cone: ln[(1 + |r|/f(-u)) / (1 - |r|/f(u))]."""
    r = np.asarray(r, dtype=float)
    nrm = float(np.linalg.norm(r))
    if nrm == 0.0:
        return 0.0
    u = r / nrm
    f_plus = deformation.radius_at(u)
    f_minus = deformation.radius_at(-u)
    if nrm >= f_plus:
        return INF
    return math.log((1.0 + nrm / f_minus) / (1.0 - nrm / f_plus))


# Concrete channel of the anisotropic-rotation restriction example; the
# ellipsoid axes shorten the two minor directions of its image.
RESTRICTION_ELLIPSOID_AXES = (1.0, 0.95, 0.45)


def restriction_channel_anisotropic() -> Channel:
    linear = np.zeros((3, 3))
    linear[0, 1] = 1.0
    linear[1, 0] = 0.5
    linear[2, 2] = 0.5
    return affine_to_channel(AffineQubitMap(linear, np.zeros(3)), label="anisotropic rotation")


def restriction_channel_shifted() -> Channel:
    return affine_to_channel(
        AffineQubitMap(np.eye(3) / 3.0, np.array([1.0 / 3.0, 0.0, 0.0])),
        label="shifted contraction",
    )


def restriction_demo(case: str, n_samples: int = 40, seed: int = 3) -> dict:
    """Non-monotonicity of the projective diameter under cone restriction.

    case "spherical_unital": a unital channel keeps its diameter when the
    Bloch ball shrinks spherically.  case "spherical_nonunital": a shifted
    contraction whose image touches the shrunken ball boundary has infinite
    restricted diameter while the psd diameter stays finite.  case
    "ellipsoid": an anisotropic rotation with infinite psd diameter becomes
    finite on a suitable ellipsoidal cone.
    """
    if case == "spherical_unital":
        T = channels_mod.depolarizing(0.5, np.eye(2) / 2)
        psd_value = 2.0 * math.log(3.0)
        rows = []
        for c in (0.3, 0.5, 0.7):
            est = diameter_sampled(T, Cone.qubit_sphere(c), n_samples=n_samples, seed=seed)
            rows.append({"radius": c, "diameter": est.lower, "psd_diameter": psd_value,
                         "matches_psd": abs(est.lower - psd_value) <= 1e-3})
        return {"case": case, "rows": rows,
                "conclusion": "spherical restriction leaves the diameter unchanged"}
    if case == "spherical_nonunital":
        T = restriction_channel_shifted()
        psd_est = diameter_sampled(T, Cone.psd(), n_samples=n_samples, seed=seed)
        restricted = diameter_sampled(T, Cone.qubit_sphere(0.5), n_samples=n_samples, seed=seed)
        return {
            "case": case,
            "psd_diameter": psd_est.lower,
            "psd_inf_suspect": psd_est.inf_suspect,
            "restricted_diameter": restricted.lower,
            "restricted_inf_suspect": restricted.inf_suspect,
            "conclusion": "image touches the shrunken base: restricted diameter diverges",
        }
    if case == "ellipsoid":
        T = restriction_channel_anisotropic()
        psd_est = diameter_sampled(T, Cone.psd(), n_samples=n_samples, seed=seed)
        restricted = diameter_sampled(
            T, Cone.qubit_ellipsoid(RESTRICTION_ELLIPSOID_AXES), n_samples=n_samples, seed=seed)
        return {
            "case": case,
            "psd_diameter": psd_est.lower,
            "psd_inf_suspect": psd_est.inf_suspect,
            "restricted_diameter": restricted.lower,
            "restricted_inf_suspect": restricted.inf_suspect,
            "ellipsoid_axes": list(RESTRICTION_ELLIPSOID_AXES),
            "conclusion": "image stays interior to the ellipsoidal base: diameter becomes finite",
        }
    raise ValueError(f"unknown restriction case {case!r}")
