"""Pydantic request/response models for the service and the CLI client.

Infinities cross the wire as the strings "inf" / "-inf"; numeric fields that
may be infinite are therefore typed as float-or-string.
"""

from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

ExtendedFloat = Union[float, str]


class MatrixModel(BaseModel):
    dim: int
    re: list[list[float]]
    im: Optional[list[list[float]]] = None
    shape: Optional[tuple[int, int]] = None


class ComplexMatrixModel(BaseModel):
    re: list[list[float]]
    im: Optional[list[list[float]]] = None


class ChannelModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    kind: Literal["kraus", "choi", "superop", "depolarizing", "qubit_affine"]
    label: str = ""
    kraus: Optional[list[ComplexMatrixModel]] = None
    choi: Optional[MatrixModel] = None
    in_dim: Optional[int] = None
    out_dim: Optional[int] = None
    matrix: Optional[list[list[float]]] = None
    p: Optional[float] = None
    sigma: Optional[MatrixModel] = None
    linear: Optional[list[list[float]]] = Field(default=None, alias="lambda")
    v: Optional[list[float]] = None


class HilbertRequest(BaseModel):
    cone: str = "psd"
    shape: Optional[tuple[int, int]] = None
    a: MatrixModel
    b: MatrixModel
    tol: float = 1e-9


class HilbertResponse(BaseModel):
    sup: ExtendedFloat
    inf: ExtendedFloat
    h: ExtendedFloat
    osc: ExtendedFloat


class NormRequest(BaseModel):
    kind: Literal["base", "dist"] = "base"
    cone: Optional[str] = None
    measurements: Optional[str] = None
    shape: Optional[tuple[int, int]] = None
    v: MatrixModel
    solver_tol: float = 1e-7


class NormResponse(BaseModel):
    value: float
    method: str
    residual: float
    c_plus: Optional[MatrixModel] = None
    c_minus: Optional[MatrixModel] = None
    witness: Optional[MatrixModel] = None


class DiameterRequest(BaseModel):
    channel: ChannelModel
    cone: str = "psd"
    shape: Optional[tuple[int, int]] = None
    samples: int = 48
    refine: int = 3
    seed: int = 0


class DiameterResponse(BaseModel):
    lower: ExtendedFloat
    upper: Optional[ExtendedFloat] = None
    exact: bool
    method: str
    samples_used: int
    inf_suspect: bool
    birkhoff_coefficient: ExtendedFloat


class CheckRequest(BaseModel):
    suite: str
    n: int = 200
    seed: int = 7
    dims: list[int] = [2, 3]


class CheckRow(BaseModel):
    context: str
    status: str
    count: int
    passed: int
    certified_failures: int
    advisory_failures: int
    min_slack: ExtendedFloat


class CheckResponse(BaseModel):
    suite: str
    n: int
    seed: int
    dims: list[int]
    rows: list[CheckRow]
    total: int
    certified_failures: int
    exploratory_log: list[str] = []


class SynthesizeRequest(BaseModel):
    rho1: MatrixModel
    rho2: MatrixModel
    rho1p: MatrixModel
    rho2p: MatrixModel


class SynthesizeResponse(BaseModel):
    feasible: bool
    reason: str = ""
    h_in: ExtendedFloat
    h_out: ExtendedFloat
    branch: str = ""
    p1: Optional[float] = None
    p2: Optional[float] = None
    choi_min_eigenvalue: Optional[float] = None
    residuals: Optional[tuple[float, float]] = None
    channel: Optional[ChannelModel] = None
    kraus: Optional[list[ComplexMatrixModel]] = None
    choi: Optional[MatrixModel] = None
    instrument: Optional[ChannelModel] = None
    instrument_choi: Optional[MatrixModel] = None
    success_probabilities: Optional[tuple[float, float]] = None


class DemoRequest(BaseModel):
    name: str
    params: dict[str, Any] = {}


class DemoResponse(BaseModel):
    name: str
    data: dict[str, Any]
