"""FastAPI service wrapping the cone-metric toolkit.

Each endpoint is a thin shell over a pure handler (`run_*`) operating on the
pydantic models from :mod:`conemetric.schemas`; the CLI calls the same
handlers in-process, so service and command line cannot drift apart.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .basenorms import MeasurementSet, base_norm, dist_norm
from .channels import best_diameter, birkhoff_coefficient, is_cone_preserving_sampled
from .cones import (
    ConeMembershipError,
    IndeterminateError,
    hilbert_distance,
    inf_ratio,
    oscillation,
    sup_ratio,
)
from .demos import run_demo as _run_demo
from .report import EXPLORATORY
from .schemas import (
    CheckRequest,
    CheckResponse,
    CheckRow,
    ChannelModel,
    DemoRequest,
    DemoResponse,
    DiameterRequest,
    DiameterResponse,
    HilbertRequest,
    HilbertResponse,
    MatrixModel,
    NormRequest,
    NormResponse,
    SynthesizeRequest,
    SynthesizeResponse,
)
from .serialize import (
    PayloadError,
    channel_kraus_payload,
    channel_to_payload,
    cone_from_name,
    format_float,
    matrix_to_payload,
    parse_channel,
    parse_matrix,
    sanitize,
)
from .suites import run_suite, summarize
from .synthesis import complete_to_instrument, synthesize
from .channels import to_choi


class DomainError(ValueError):
    """Domain violation (valid payload, invalid mathematics): CLI exit 3."""


def _matrix(model: MatrixModel):
    H, shape = parse_matrix(model.model_dump())
    return H, shape


def _cone(name: str, shape, fallback_shape=None):
    shape = shape or fallback_shape
    return cone_from_name(name, tuple(shape) if shape else None)


def run_hilbert(req: HilbertRequest) -> HilbertResponse:
    a, shape_a = _matrix(req.a)
    b, shape_b = _matrix(req.b)
    cone = _cone(req.cone, req.shape, shape_a or shape_b)
    try:
        sup = sup_ratio(cone, a, b, tol=req.tol)
        inf = inf_ratio(cone, a, b, tol=req.tol, check=False)
        h = hilbert_distance(cone, a, b, tol=req.tol, check=False)
        osc = oscillation(cone, a, b, tol=req.tol, check=False)
    except (ConeMembershipError, ValueError) as exc:
        raise DomainError(str(exc)) from exc
    return HilbertResponse(sup=format_float(sup), inf=format_float(inf),
                           h=format_float(h), osc=format_float(osc))


def run_norm(req: NormRequest) -> NormResponse:
    v, shape_v = _matrix(req.v)
    try:
        if req.kind == "base":
            if req.cone is None:
                raise PayloadError("base norm needs --cone")
            cone = _cone(req.cone, req.shape, shape_v)
            report = base_norm(cone, v, feas_tol=req.solver_tol,
                               bis_tol=max(req.solver_tol, 1e-6))
        else:
            if req.measurements is None:
                raise PayloadError("distinguishability norm needs --measurements")
            name = req.measurements.strip().lower()
            shape = req.shape or shape_v
            if name == "m_plus":
                M = MeasurementSet.plus()
            elif name in ("m_ppt", "m_ppt_plus"):
                if shape is None:
                    raise PayloadError(f"measurement set {name!r} needs --shape")
                M = (MeasurementSet.ppt if name == "m_ppt" else MeasurementSet.ppt_plus)(*shape)
            else:
                raise PayloadError(f"unknown measurement set {name!r}")
            report = dist_norm(M, v)
    except IndeterminateError as exc:
        raise DomainError(str(exc)) from exc
    return NormResponse(
        value=report.value,
        method=report.method,
        residual=report.residual,
        c_plus=MatrixModel(**matrix_to_payload(report.c_plus)) if report.c_plus is not None else None,
        c_minus=MatrixModel(**matrix_to_payload(report.c_minus)) if report.c_minus is not None else None,
        witness=MatrixModel(**matrix_to_payload(report.witness)) if report.witness is not None else None,
    )


def run_diameter(req: DiameterRequest) -> DiameterResponse:
    T = parse_channel(req.channel.model_dump(by_alias=True))
    shape = req.shape
    cone = _cone(req.cone, shape)
    if not is_cone_preserving_sampled(T, cone, seed=req.seed):
        raise DomainError("channel does not preserve the requested cone (sampled refutation)")
    try:
        est = best_diameter(T, cone, n_samples=req.samples, seed=req.seed, n_refine=req.refine)
    except (ValueError, IndeterminateError) as exc:
        raise DomainError(str(exc)) from exc
    return DiameterResponse(
        lower=format_float(est.lower),
        upper=None if est.upper is None else format_float(est.upper),
        exact=est.exact,
        method=est.method,
        samples_used=est.samples_used,
        inf_suspect=est.inf_suspect,
        birkhoff_coefficient=format_float(birkhoff_coefficient(est.value)),
    )


def run_check(req: CheckRequest) -> CheckResponse:
    try:
        reports = run_suite(req.suite, n=req.n, seed=req.seed, dims=tuple(req.dims))
    except KeyError as exc:
        raise PayloadError(str(exc)) from exc
    groups = summarize(reports)
    rows = [
        CheckRow(context=ctx, status=g["status"], count=g["count"], passed=g["passed"],
                 certified_failures=g["certified_failures"],
                 advisory_failures=g["advisory_failures"],
                 min_slack=format_float(g["min_slack"]))
        for ctx, g in groups.items()
    ]
    exploratory = [r.line() for r in reports if r.status == EXPLORATORY]
    return CheckResponse(
        suite=req.suite, n=req.n, seed=req.seed, dims=list(req.dims),
        rows=rows, total=len(reports),
        certified_failures=sum(1 for r in reports if r.certified_failure),
        exploratory_log=exploratory,
    )


def run_synthesize(req: SynthesizeRequest) -> SynthesizeResponse:
    rho1, _ = _matrix(req.rho1)
    rho2, _ = _matrix(req.rho2)
    rho1p, _ = _matrix(req.rho1p)
    rho2p, _ = _matrix(req.rho2p)
    result = synthesize(rho1, rho2, rho1p, rho2p)
    if not result.feasible:
        return SynthesizeResponse(
            feasible=False, reason=result.reason,
            h_in=format_float(result.h_in), h_out=format_float(result.h_out))
    T = result.channel
    instrument = complete_to_instrument(T)
    inst_rho1 = instrument.apply(rho1)
    d_out = instrument.out_dim // 2
    succ1 = float(inst_rho1.reshape(d_out, 2, d_out, 2)[:, 1, :, 1].trace().real)
    inst_rho2 = instrument.apply(rho2)
    succ2 = float(inst_rho2.reshape(d_out, 2, d_out, 2)[:, 1, :, 1].trace().real)
    return SynthesizeResponse(
        feasible=True,
        h_in=format_float(result.h_in),
        h_out=format_float(result.h_out),
        branch=result.branch,
        p1=result.p1,
        p2=result.p2,
        choi_min_eigenvalue=result.choi_min_eigenvalue,
        residuals=result.residuals,
        channel=ChannelModel(**channel_to_payload(T)),
        kraus=channel_kraus_payload(T),
        choi=MatrixModel(**matrix_to_payload(to_choi(T))),
        instrument=ChannelModel(**channel_to_payload(instrument)),
        instrument_choi=MatrixModel(**matrix_to_payload(to_choi(instrument))),
        success_probabilities=(succ1, succ2),
    )


def run_demo(req: DemoRequest) -> DemoResponse:
    try:
        data = _run_demo(req.name, **req.params)
    except TypeError as exc:
        raise PayloadError(f"bad demo parameters: {exc}") from exc
    except ValueError as exc:
        raise PayloadError(str(exc)) from exc
    return DemoResponse(name=req.name, data=sanitize(data))


app = FastAPI(
    title="conemetric",
    version=__version__,
    description="Hilbert projective metrics, base norms, channel contraction "
                "coefficients and probabilistic-map synthesis over operator cones.",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


def _wrap(fn, req):
    try:
        return fn(req)
    except PayloadError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except DomainError as exc:
        raise HTTPException(status_code=400, detail=str(exc))
    except IndeterminateError as exc:
        raise HTTPException(status_code=409, detail=str(exc))


@app.post("/hilbert", response_model=HilbertResponse)
def hilbert_endpoint(req: HilbertRequest) -> HilbertResponse:
    return _wrap(run_hilbert, req)


@app.post("/norm", response_model=NormResponse)
def norm_endpoint(req: NormRequest) -> NormResponse:
    return _wrap(run_norm, req)


@app.post("/diameter", response_model=DiameterResponse)
def diameter_endpoint(req: DiameterRequest) -> DiameterResponse:
    return _wrap(run_diameter, req)


@app.post("/check", response_model=CheckResponse)
def check_endpoint(req: CheckRequest) -> CheckResponse:
    return _wrap(run_check, req)


@app.post("/synthesize", response_model=SynthesizeResponse)
def synthesize_endpoint(req: SynthesizeRequest) -> SynthesizeResponse:
    return _wrap(run_synthesize, req)


@app.post("/demo", response_model=DemoResponse)
def demo_endpoint(req: DemoRequest) -> DemoResponse:
    return _wrap(run_demo, req)
