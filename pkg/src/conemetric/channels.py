"""Linear maps on Hermitian matrix space.

A channel is stored as a real matrix acting on coordinates in a fixed
orthonormal Hermitian basis (normalized identity plus generalized Gell-Mann
elements), which makes Hermiticity preservation automatic and the adjoint a
plain transpose.  On top of that sit the depolarizing family, projective
diameters (closed-form and sampled), the Birkhoff contraction coefficient
and the spectral-bound check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import cones as cones_mod
from .cones import Cone, hilbert_distance
from .linalg import (
    RANK_TOL,
    as_hermitian,
    general_spectrum,
    op_norm,
    partial_transpose,
    psd_check,
    random_pure_state,
    trace_norm,
)
from .report import ADVISORY, CERTIFIED, NOT_APPLICABLE, CheckReport

INF = float("inf")

# Sampled diameter estimates beyond this are reported as effectively infinite.
INF_SUSPECT_THRESHOLD = math.log(1e12)


@lru_cache(maxsize=32)
def hermitian_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Orthonormal basis of Hermitian dim x dim matrices.

    Order: identity/sqrt(dim), then the symmetric and antisymmetric
    off-diagonal elements for each pair (j < k), then the diagonal
    generalized Gell-Mann matrices.  For dim = 2 this is exactly the Pauli
    basis divided by sqrt(2), so Bloch coordinates read off directly.
    """
    basis = [np.eye(dim, dtype=complex) / math.sqrt(dim)]
    sym, asym = [], []
    for j in range(dim):
        for k in range(j + 1, dim):
            s = np.zeros((dim, dim), dtype=complex)
            s[j, k] = s[k, j] = 1.0 / math.sqrt(2.0)
            sym.append(s)
            a = np.zeros((dim, dim), dtype=complex)
            a[j, k] = -1j / math.sqrt(2.0)
            a[k, j] = 1j / math.sqrt(2.0)
            asym.append(a)
    basis.extend(sym)
    basis.extend(asym)
    for l in range(1, dim):
        d = np.zeros((dim, dim), dtype=complex)
        for m in range(l):
            d[m, m] = 1.0
        d[l, l] = -float(l)
        basis.append(d / math.sqrt(l * (l + 1)))
    return tuple(basis)


@lru_cache(maxsize=32)
def _basis_stack(dim: int) -> np.ndarray:
    return np.stack(hermitian_basis(dim))


def to_coords(H, dim: Optional[int] = None) -> np.ndarray:
    H = np.asarray(H, dtype=complex)
    dim = dim or H.shape[0]
    return np.einsum("bij,ji->b", _basis_stack(dim), H).real


def from_coords(coords, dim: int) -> np.ndarray:
    return np.einsum("b,bij->ij", np.asarray(coords, dtype=float), _basis_stack(dim))


@dataclass
class Channel:
    matrix: np.ndarray  # real, (out_dim**2, in_dim**2)
    in_dim: int
    out_dim: int
    label: str = ""
    family: Optional[tuple] = None  # structured tag for closed-form shortcuts

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.shape != (self.out_dim**2, self.in_dim**2):
            raise ValueError("channel matrix shape inconsistent with dimensions")
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("channel matrix has non-finite entries")

    def __call__(self, H) -> np.ndarray:
        return self.apply(H)

    def apply(self, H) -> np.ndarray:
        H = as_hermitian(H)
        if H.shape[0] != self.in_dim:
            raise ValueError("input dimension mismatch")
        return from_coords(self.matrix @ to_coords(H), self.out_dim)

    def apply_general(self, X) -> np.ndarray:
        """Complex-linear extension to arbitrary (non-Hermitian) matrices."""
        X = np.asarray(X, dtype=complex)
        h1 = 0.5 * (X + X.conj().T)
        h2 = (X - X.conj().T) / 2j
        return self.apply(h1) + 1j * self.apply(h2)

    def adjoint(self) -> "Channel":
        return Channel(self.matrix.T, self.out_dim, self.in_dim, label=f"{self.label}*" if self.label else "")

    def compose(self, other: "Channel") -> "Channel":
        """self after other."""
        if other.out_dim != self.in_dim:
            raise ValueError("composition dimension mismatch")
        return Channel(self.matrix @ other.matrix, other.in_dim, self.out_dim)

    def __matmul__(self, other: "Channel") -> "Channel":
        return self.compose(other)


def from_apply(fn: Callable[[np.ndarray], np.ndarray], in_dim: int, out_dim: int,
               label: str = "", family: Optional[tuple] = None) -> Channel:
    cols = []
    for B in hermitian_basis(in_dim):
        cols.append(to_coords(fn(B), out_dim))
    return Channel(np.column_stack(cols), in_dim, out_dim, label=label, family=family)


def identity_channel(dim: int) -> Channel:
    return Channel(np.eye(dim**2), dim, dim, label="identity", family=("depolarizing", 1.0, None))


def from_kraus(kraus: Sequence[np.ndarray], label: str = "") -> Channel:
    kraus = [np.asarray(K, dtype=complex) for K in kraus]
    if not kraus:
        raise ValueError("need at least one Kraus operator")
    out_dim, in_dim = kraus[0].shape
    if any(K.shape != (out_dim, in_dim) for K in kraus):
        raise ValueError("Kraus operators must share a common shape")

    def fn(H):
        return sum(K @ H @ K.conj().T for K in kraus)

    return from_apply(fn, in_dim, out_dim, label=label)


def to_choi(T: Channel) -> np.ndarray:
    """Choi matrix with the input factor first: J = sum_ij |i><j| (x) T(|i><j|)."""
    d, dp = T.in_dim, T.out_dim
    J = np.zeros((d * dp, d * dp), dtype=complex)
    for i in range(d):
        for j in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[i, j] = 1.0
            J[i * dp:(i + 1) * dp, j * dp:(j + 1) * dp] = T.apply_general(E)
    return J


def from_choi(J, in_dim: int, out_dim: int, label: str = "") -> Channel:
    J = np.asarray(J, dtype=complex)
    if J.shape != (in_dim * out_dim, in_dim * out_dim):
        raise ValueError("Choi matrix dimension mismatch")

    def fn(H):
        out = np.zeros((out_dim, out_dim), dtype=complex)
        for i in range(in_dim):
            for j in range(in_dim):
                out += H[i, j] * J[i * out_dim:(i + 1) * out_dim, j * out_dim:(j + 1) * out_dim]
        return out

    return from_apply(fn, in_dim, out_dim, label=label)


def is_completely_positive(T: Channel, tol: float = 1e-9) -> bool:
    return psd_check(to_choi(T), tol)


def is_trace_preserving(T: Channel, tol: float = 1e-9) -> bool:
    image = T.adjoint().apply(np.eye(T.out_dim))
    return op_norm(image - np.eye(T.in_dim)) <= tol * T.in_dim


def is_unital(T: Channel, tol: float = 1e-9) -> bool:
    return op_norm(T.apply(np.eye(T.in_dim)) - np.eye(T.out_dim)) <= tol * T.in_dim


def is_positive_sampled(T: Channel, n_samples: int = 64, seed: int = 0, tol: float = 1e-9) -> bool:
    """One-sided positivity probe: can refute, never prove.

    Tests the images of computational basis states and of seeded Haar-like
    pure states for positive semidefiniteness.
    """
    for i in range(T.in_dim):
        E = np.zeros((T.in_dim, T.in_dim))
        E[i, i] = 1.0
        if not psd_check(T.apply(E), tol):
            return False
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        if not psd_check(T.apply(random_pure_state(rng, T.in_dim)), tol):
            return False
    return True


def depolarizing(p: float, sigma) -> Channel:
    """T(rho) = p*rho + (1-p) tr(rho) sigma."""
    sigma = as_hermitian(sigma)
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing parameter must lie in [0, 1]")
    if not psd_check(sigma, RANK_TOL) or abs(np.trace(sigma).real - 1.0) > 1e-9:
        raise ValueError("sigma must be a density matrix")
    d = sigma.shape[0]

    def fn(H):
        return p * H + (1.0 - p) * np.trace(H).real * sigma

    return from_apply(fn, d, d, label=f"depolarizing(p={p})", family=("depolarizing", p, sigma))


@dataclass
class DiameterEstimate:
    """Projective diameter of a channel image; a lower bound, optionally an
    upper bound and an exactness flag when both coincide."""

    lower: float
    upper: Optional[float] = None
    exact: bool = False
    method: str = "sampled"
    samples_used: int = 0
    inf_suspect: bool = False
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.upper is not None and math.isfinite(self.upper) and math.isfinite(self.lower):
            if self.lower > self.upper + 1e-12 * (1.0 + abs(self.upper)):
                raise ValueError("diameter lower bound exceeds upper bound")
        if self.lower >= INF_SUSPECT_THRESHOLD:
            self.inf_suspect = True

    @property
    def value(self) -> float:
        """Best point estimate: the exact value when known, else the lower bound."""
        return self.lower


def diameter_depolarizing(p: float, sigma, cone: Cone = Cone.psd()) -> DiameterEstimate:
    """Closed-form projective diameter bounds for T(rho) = p rho + (1-p) tr(rho) sigma.

    With lam1 <= lam2 the two smallest eigenvalues of sigma, the image
    diameter lies between ln[(1 + p/((1-p)lam1))(1 + p/((1-p)lam2))] and
    2 ln(1 + p/((1-p)lam1)); the bounds coincide when the lowest eigenvalue
    is degenerate.  The diameter w.r.t. the ppt cone equals the psd-cone
    diameter of depolarization towards the partially transposed fixed point.
    """
    sigma = as_hermitian(sigma)
    if not 0.0 <= p <= 1.0:
        raise ValueError("depolarizing parameter must lie in [0, 1]")
    if cone.kind == cones_mod.PPT:
        d1, d2 = cone.shape
        sigma_t = partial_transpose(sigma, d1, d2)
        if not psd_check(sigma_t, RANK_TOL):
            raise ValueError("ppt-cone diameter needs a fixed point with psd partial transpose")
        return diameter_depolarizing(p, sigma_t, Cone.psd())
    if cone.kind != cones_mod.PSD:
        raise ValueError("closed form available for the psd and ppt cones only")

    if p == 0.0:
        return DiameterEstimate(0.0, 0.0, True, "depolarizing_closed_form")
    if p >= 1.0:
        return DiameterEstimate(INF, INF, True, "depolarizing_closed_form")
    lam = np.linalg.eigvalsh(sigma)
    lam1, lam2 = float(lam[0]), float(lam[1])
    if lam1 <= RANK_TOL * float(lam[-1]):
        return DiameterEstimate(INF, INF, True, "depolarizing_closed_form")
    m1 = 1.0 + p / ((1.0 - p) * lam1)
    m2 = 1.0 + p / ((1.0 - p) * lam2)
    lower = math.log(m1) + math.log(m2)
    upper = 2.0 * math.log(m1)
    exact = (lam2 - lam1) <= 1e-9 * lam2
    if exact:
        lower = upper
    return DiameterEstimate(lower, upper, exact, "depolarizing_closed_form",
                            detail={"lam1": lam1, "lam2": lam2})


def _extreme_point_sampler(cone: Cone, dim: int):
    """Parametrized extreme points of the cone base, for sampling and for
    coordinate refinement.  Returns (n_params, random_params, to_point)."""
    if cone.kind in (cones_mod.PSD, cones_mod.PPT):
        n_params = 2 * dim

        def random_params(rng):
            return rng.normal(size=n_params)

        def to_point(x):
            psi = x[:dim] + 1j * x[dim:]
            nrm = np.linalg.norm(psi)
            if nrm < 1e-150:
                psi = np.zeros(dim, dtype=complex)
                psi[0] = 1.0
            else:
                psi = psi / nrm
            point = np.outer(psi, psi.conj())
            if cone.kind == cones_mod.PPT:
                point = partial_transpose(point, *cone.shape)
            return point

        return n_params, random_params, to_point
    if cone.kind == cones_mod.QUBIT_DEFORMED:
        deformation = cone.deformation

        def random_params(rng):
            return rng.normal(size=3)

        def to_point(x):
            nrm = np.linalg.norm(x)
            u = np.array([0.0, 0.0, 1.0]) if nrm < 1e-150 else x / nrm
            r = deformation.radius_at(u) * u
            return 0.5 * (np.eye(2, dtype=complex)
                          + r[0] * np.array([[0, 1], [1, 0]])
                          + r[1] * np.array([[0, -1j], [1j, 0]])
                          + r[2] * np.array([[1, 0], [0, -1]]))

        return 3, random_params, to_point
    raise ValueError(f"no extreme-point sampler for cone kind {cone.kind!r}")


def diameter_sampled(
    T: Channel,
    cone: Cone,
    n_samples: int = 48,
    n_refine: int = 3,
    seed: int = 0,
    out_cone: Optional[Cone] = None,
) -> DiameterEstimate:
    """Sampled lower bound on the projective diameter of T's image.

    Seeds extreme points of the input-cone base, takes the largest pairwise
    Hilbert distance of their images, then runs greedy coordinate-ascent
    refinement (step-halving) on the best pair.  Deterministic for a fixed
    seed.  Only ever a lower bound; estimates exceeding ln(1e12) carry the
    inf-suspect flag.
    """
    out_cone = out_cone or cone
    rng = np.random.default_rng(seed)
    n_params, random_params, to_point = _extreme_point_sampler(cone, T.in_dim)

    def h_of(xa, xb):
        return hilbert_distance(out_cone, T.apply(to_point(xa)), T.apply(to_point(xb)), check=False)

    params = [random_params(rng) for _ in range(max(2, n_samples))]
    images = [T.apply(to_point(x)) for x in params]
    best = 0.0
    best_pair = (params[0], params[1])
    for i in range(len(params)):
        for j in range(i + 1, len(params)):
            h = hilbert_distance(out_cone, images[i], images[j], check=False)
            if h > best:
                best = h
                best_pair = (params[i], params[j])
            if h == INF:
                return DiameterEstimate(INF, None, False, "sampled", samples_used=len(params),
                                        inf_suspect=True)

    xa, xb = best_pair[0].copy(), best_pair[1].copy()
    rel_gain = 1e-13
    for _ in range(max(0, n_refine)):
        for which in (0, 1):
            vec = xa if which == 0 else xb
            for idx in range(n_params):
                step = 0.25
                moves = 0
                while step > 1e-13 and moves < 120:
                    improved = False
                    for sign in (1.0, -1.0):
                        trial = vec.copy()
                        trial[idx] += sign * step
                        h = h_of(trial, xb) if which == 0 else h_of(xa, trial)
                        if h > best + rel_gain * (1.0 + abs(best)):
                            best = h
                            vec[:] = trial
                            improved = True
                            moves += 1
                            if h == INF or h > 2 * INF_SUSPECT_THRESHOLD:
                                return DiameterEstimate(
                                    best, None, False, "sampled",
                                    samples_used=len(params), inf_suspect=True)
                            break
                    if not improved:
                        step *= 0.5
    return DiameterEstimate(best, None, False, "sampled", samples_used=len(params))


def best_diameter(T: Channel, cone: Cone, n_samples: int = 48, seed: int = 0,
                  n_refine: int = 3) -> DiameterEstimate:
    """Closed form when the channel family admits one, sampled lower bound
    otherwise."""
    if T.family and T.family[0] == "depolarizing":
        p, sigma = T.family[1], T.family[2]
        if sigma is None:
            sigma = np.eye(T.in_dim) / T.in_dim
        if cone.kind in (cones_mod.PSD, cones_mod.PPT):
            return diameter_depolarizing(p, sigma, cone)
    if T.in_dim == 2 and T.out_dim == 2 and cone.kind == cones_mod.PSD and is_trace_preserving(T):
        from . import qubit

        affine = qubit.channel_to_affine(T)
        if np.linalg.norm(affine.shift) <= 1e-10:
            return qubit.unital_diameter_estimate(affine.linear)
    return diameter_sampled(T, cone, n_samples=n_samples, n_refine=n_refine, seed=seed)


def birkhoff_coefficient(diameter: float) -> float:
    """Best possible contraction coefficient tanh(diameter/4); 1 at infinity."""
    if diameter < 0:
        raise ValueError("diameter must be nonnegative")
    return math.tanh(diameter / 4.0) if math.isfinite(diameter) else 1.0


def base_norm_contraction_coefficient(
    T: Channel,
    cone: Cone = Cone.psd(),
    n_samples: int = 64,
    seed: int = 0,
) -> float:
    """Half the largest base-norm distance between images of extreme base
    points.  Exact for qubit channels w.r.t. the psd cone (largest singular
    value of the Bloch matrix); a sampled lower bound otherwise.
    """
    if not is_trace_preserving(T) or not is_positive_sampled(T, n_samples=16, seed=seed):
        raise ValueError("contraction coefficient requires a base-preserving map")
    if T.in_dim == 2 and T.out_dim == 2 and cone.kind == cones_mod.PSD:
        from . import qubit

        return qubit.eta1(T)

    from .basenorms import base_norm

    _, random_params, to_point = _extreme_point_sampler(cone, T.in_dim)
    rng = np.random.default_rng(seed)
    points = [to_point(random_params(rng)) for _ in range(n_samples)]
    if cone.kind in (cones_mod.PSD, cones_mod.PPT):
        for i in range(T.in_dim):
            E = np.zeros((T.in_dim, T.in_dim), dtype=complex)
            E[i, i] = 1.0
            points.append(E if cone.kind == cones_mod.PSD else partial_transpose(E, *cone.shape))
    best = 0.0
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            diff = T.apply(points[i]) - T.apply(points[j])
            if cone.kind == cones_mod.PSD:
                value = trace_norm(diff)
            elif cone.kind == cones_mod.PPT:
                value = trace_norm(partial_transpose(diff, *cone.shape))
            else:
                value = base_norm(cone, diff).value
            best = max(best, 0.5 * value)
    return best


def is_cone_preserving_sampled(T: Channel, cone: Cone, n_samples: int = 24, seed: int = 0,
                               tol: float = 1e-8) -> bool:
    """One-sided probe that sampled extreme points of the input-cone base
    map into the (same-kind) output cone; can refute, never prove."""
    try:
        _, random_params, to_point = _extreme_point_sampler(cone, T.in_dim)
    except ValueError:
        return True  # no sampler for this cone family; nothing to refute
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        image = T.apply(to_point(random_params(rng)))
        if not cones_mod.member(cone, image, tol):
            return False
    return True


def fixed_point(T: Channel, max_iter: int = 5000, tol: float = 1e-12) -> Optional[np.ndarray]:
    """Power iteration for a trace-normalized fixed point of a square channel."""
    if T.in_dim != T.out_dim:
        return None
    x = np.eye(T.in_dim, dtype=complex) / T.in_dim
    for _ in range(max_iter):
        y = T.apply(x)
        tr = np.trace(y).real
        if abs(tr) < 1e-300:
            return None
        y = y / tr
        if op_norm(y - x) <= tol:
            return y
        x = y
    return None


def spectral_bound_check(T: Channel, cone: Cone, diameter: float, abs_tol: float = 1e-7) -> CheckReport:
    """All but the leading eigenvalue of a cone-preserving map with a fixed
    point must have modulus at most tanh(diameter/4)."""
    if not math.isfinite(diameter):
        return CheckReport("spectral bound", 0.0, INF, abs_tol, NOT_APPLICABLE,
                           detail={"reason": "diameter not finite"})
    c = fixed_point(T)
    if c is None or not cones_mod.member(cone, c, 1e-8):
        return CheckReport("spectral bound", 0.0, INF, abs_tol, NOT_APPLICABLE,
                           detail={"reason": "no fixed point found in cone"})
    spectrum = general_spectrum(T.matrix)
    sub = np.abs(spectrum[1:]) if len(spectrum) > 1 else np.array([0.0])
    bound = birkhoff_coefficient(diameter)
    return CheckReport(
        "spectral bound",
        float(np.max(sub)) if sub.size else 0.0,
        bound,
        abs_tol,
        CERTIFIED,
        detail={"spectrum_moduli": [float(abs(s)) for s in spectrum]},
    )


def adjoint_diameter_check(
    T: Channel,
    cone: Cone,
    n_samples: int = 48,
    seed: int = 0,
    slack: float = 5e-2,
) -> CheckReport:
    """Consistency probe: sampled diameters of T and its adjoint w.r.t. the
    cone and its dual should agree.  Advisory, not a proof."""
    d1 = diameter_sampled(T, cone, n_samples=n_samples, seed=seed)
    dual = cones_mod.dual_cone(cone)
    d2 = diameter_sampled(T.adjoint(), dual, n_samples=n_samples, seed=seed + 1)
    if d1.inf_suspect or d2.inf_suspect:
        both = d1.inf_suspect and d2.inf_suspect
        return CheckReport("adjoint diameter (both inf-suspect)", 0.0 if both else 1.0, 0.0,
                           1e-12, ADVISORY,
                           detail={"T": d1.lower, "T_adjoint": d2.lower})
    gap = abs(d1.lower - d2.lower)
    return CheckReport(
        "adjoint diameter agreement",
        gap,
        slack * (1.0 + max(d1.lower, d2.lower)),
        1e-12,
        ADVISORY,
        detail={"T": d1.lower, "T_adjoint": d2.lower},
    )
