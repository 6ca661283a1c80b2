"""Canonical JSON for matrices, channels and reports.

Complex matrices travel as separate real/imaginary arrays; infinities are
serialized as the strings "inf" / "-inf" (JSON has no native infinity); all
floats print with 17 significant digits so every emitted value re-parses
bit-for-bit.
"""

from __future__ import annotations

import json
import math
from typing import Any, Optional

import numpy as np

from .channels import Channel, from_choi, from_kraus, to_choi
from .cones import Cone
from .linalg import as_hermitian, eig_hermitian
from .qubit import AffineQubitMap, affine_to_channel


class PayloadError(ValueError):
    """Malformed input payload (maps to CLI exit code 2 / HTTP 422)."""


def format_float(x: float) -> Any:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(x)


def parse_float(x: Any) -> float:
    if isinstance(x, str):
        if x == "inf":
            return math.inf
        if x == "-inf":
            return -math.inf
        raise PayloadError(f"unexpected string in place of a number: {x!r}")
    return float(x)


def _float_repr(x: float) -> str:
    if math.isnan(x):
        raise ValueError("NaN is not serializable")
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON with canonical float formatting."""
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_repr(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(x) for x in obj) + "]"
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj)!r}")


def sanitize(obj: Any) -> Any:
    """Recursively replace non-finite floats by their string form so the
    result is representable in plain JSON."""
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {k: sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    return obj


def matrix_to_payload(H, shape: Optional[tuple[int, int]] = None) -> dict:
    # Canonicalize so a parse (which symmetrizes) reproduces the payload
    # bit-for-bit: averaging an exactly Hermitian matrix is the identity.
    H = as_hermitian(np.asarray(H, dtype=complex))
    payload = {
        "dim": int(H.shape[0]),
        "re": [[float(x) for x in row] for row in H.real],
        "im": [[float(x) for x in row] for row in H.imag],
    }
    if shape is not None:
        payload["shape"] = [int(shape[0]), int(shape[1])]
    return payload


def parse_matrix(payload: dict) -> tuple[np.ndarray, Optional[tuple[int, int]]]:
    """Hermitian matrix from its re/im payload, with shape validation."""
    try:
        dim = int(payload["dim"])
        re = np.asarray(payload["re"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise PayloadError(f"malformed matrix payload: {exc}") from exc
    im = np.asarray(payload.get("im") or np.zeros((dim, dim)), dtype=float)
    if re.shape != (dim, dim) or im.shape != (dim, dim):
        raise PayloadError(f"matrix arrays must be {dim}x{dim}")
    H = re + 1j * im
    try:
        H = as_hermitian(H)
    except ValueError as exc:
        raise PayloadError(str(exc)) from exc
    shape = payload.get("shape")
    if shape is not None:
        shape = (int(shape[0]), int(shape[1]))
        if shape[0] * shape[1] != dim:
            raise PayloadError(f"shape {shape} incompatible with dimension {dim}")
    return H, shape


def _parse_complex_matrix(payload: dict) -> np.ndarray:
    re = np.asarray(payload["re"], dtype=float)
    im = np.asarray(payload.get("im") or np.zeros_like(re), dtype=float)
    if re.shape != im.shape or re.ndim != 2:
        raise PayloadError("complex matrix payload needs matching 2d re/im arrays")
    return re + 1j * im


def parse_channel(payload: dict) -> Channel:
    kind = payload.get("kind")
    try:
        if kind == "kraus":
            ops = [_parse_complex_matrix(k) for k in payload["kraus"]]
            return from_kraus(ops, label=payload.get("label", ""))
        if kind == "choi":
            J, _ = parse_matrix(payload["choi"])
            return from_choi(J, int(payload["in_dim"]), int(payload["out_dim"]),
                             label=payload.get("label", ""))
        if kind == "superop":
            matrix = np.asarray(payload["matrix"], dtype=float)
            return Channel(matrix, int(payload["in_dim"]), int(payload["out_dim"]),
                           label=payload.get("label", ""))
        if kind == "depolarizing":
            sigma, _ = parse_matrix(payload["sigma"])
            from .channels import depolarizing

            return depolarizing(float(payload["p"]), sigma)
        if kind == "qubit_affine":
            linear = np.asarray(payload["lambda"], dtype=float)
            shift = np.asarray(payload.get("v") or [0.0, 0.0, 0.0], dtype=float)
            if linear.shape != (3, 3) or shift.shape != (3,):
                raise PayloadError("qubit_affine needs a 3x3 'lambda' and length-3 'v'")
            return affine_to_channel(AffineQubitMap(linear, shift),
                                     label=payload.get("label", ""))
    except PayloadError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PayloadError(f"malformed channel payload: {exc}") from exc
    raise PayloadError(f"unknown channel kind {kind!r}")


def channel_to_payload(T: Channel) -> dict:
    return {
        "kind": "superop",
        "in_dim": T.in_dim,
        "out_dim": T.out_dim,
        "matrix": [[float(x) for x in row] for row in T.matrix],
        "label": T.label,
    }


def kraus_from_choi(J, in_dim: int, out_dim: int, tol: float = 1e-10) -> list[np.ndarray]:
    """Kraus operators from the eigendecomposition of a psd Choi matrix."""
    values, vectors = eig_hermitian(J)
    lam_max = float(np.max(values)) if values.size else 0.0
    ops = []
    for i in range(len(values) - 1, -1, -1):
        if values[i] <= tol * max(lam_max, 1.0):
            break
        vec = vectors[:, i] * math.sqrt(values[i])
        ops.append(vec.reshape(in_dim, out_dim).T.copy())
    return ops


def channel_kraus_payload(T: Channel, tol: float = 1e-10) -> list[dict]:
    kraus = kraus_from_choi(to_choi(T), T.in_dim, T.out_dim, tol=tol)
    return [
        {"re": [[float(x) for x in row] for row in K.real],
         "im": [[float(x) for x in row] for row in K.imag]}
        for K in kraus
    ]


def cone_from_name(name: str, shape: Optional[tuple[int, int]] = None) -> Cone:
    name = name.strip().lower()
    if name == "psd":
        return Cone.psd()
    if name in ("ppt", "ppt_cap_psd", "conv_psd_ppt"):
        if shape is None:
            raise PayloadError(f"cone {name!r} needs --shape d1 d2")
        builders = {"ppt": Cone.ppt, "ppt_cap_psd": Cone.ppt_cap_psd,
                    "conv_psd_ppt": Cone.conv_psd_ppt}
        return builders[name](shape[0], shape[1])
    if name.startswith("sphere:"):
        return Cone.qubit_sphere(float(name.split(":", 1)[1]))
    if name.startswith("ellipsoid:"):
        axes = [float(x) for x in name.split(":", 1)[1].split(",")]
        if len(axes) != 3:
            raise PayloadError("ellipsoid cone needs three semi-axes")
        return Cone.qubit_ellipsoid(axes)
    raise PayloadError(f"unknown cone {name!r}")
