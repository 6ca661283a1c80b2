"""Command line client.

Thin shell over the service handlers: every subcommand builds a pydantic
request, dispatches it (in-process by default, over HTTP against a running
service with --server), and prints the response as canonical JSON.

Exit codes: 0 success, 1 certified check failure, 2 usage or parse error,
3 domain violation, 4 infeasible synthesis.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

from pydantic import ValidationError

from .cones import IndeterminateError
from .schemas import (
    CheckRequest,
    DemoRequest,
    DiameterRequest,
    HilbertRequest,
    NormRequest,
    SynthesizeRequest,
)
from .serialize import PayloadError, dumps
from .service import (
    DomainError,
    run_check,
    run_demo,
    run_diameter,
    run_hilbert,
    run_norm,
    run_synthesize,
)

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INFEASIBLE = 4

_HANDLERS = {
    "hilbert": run_hilbert,
    "norm": run_norm,
    "diameter": run_diameter,
    "check": run_check,
    "synthesize": run_synthesize,
    "demo": run_demo,
}


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise PayloadError(f"cannot read {path}: {exc}") from exc


def _dispatch(endpoint: str, request, server: str | None) -> dict:
    if server is None:
        response = _HANDLERS[endpoint](request)
        return response.model_dump()
    url = server.rstrip("/") + "/" + endpoint
    body = request.model_dump_json(by_alias=True).encode()
    http_req = urllib.request.Request(url, data=body,
                                      headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(http_req) as resp:
            return json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        detail = exc.read().decode(errors="replace")
        if exc.code == 422:
            raise PayloadError(detail)
        raise DomainError(detail)
    except urllib.error.URLError as exc:
        raise DomainError(f"cannot reach server {server}: {exc}")


def _print(payload: dict) -> None:
    sys.stdout.write(dumps(payload) + "\n")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--server", default=None,
                        help="base URL of a running conemetric service (default: in-process)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conemetric",
        description="Hilbert projective metrics, cone base norms, channel "
                    "contraction coefficients and probabilistic-map synthesis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", help="sup/inf ratios, Hilbert distance and oscillation")
    p.add_argument("a", help="path to the first matrix (JSON)")
    p.add_argument("b", help="path to the second matrix (JSON)")
    p.add_argument("--cone", default="psd")
    p.add_argument("--shape", nargs=2, type=int, default=None, metavar=("D1", "D2"))
    p.add_argument("--tol", "--rank-tol", dest="tol", type=float, default=1e-9,
                   help="membership/support tolerance (relative)")
    _add_common(p)

    p = sub.add_parser("norm", help="base norm or distinguishability norm")
    p.add_argument("v", help="path to the matrix (JSON)")
    p.add_argument("--kind", choices=("base", "dist"), default="base")
    p.add_argument("--cone", default=None)
    p.add_argument("--measurements", default=None,
                   help="m_plus | m_ppt | m_ppt_plus (for --kind dist)")
    p.add_argument("--shape", nargs=2, type=int, default=None, metavar=("D1", "D2"))
    p.add_argument("--solver-tol", type=float, default=1e-7,
                   help="feasibility tolerance of solver-backed norms")
    _add_common(p)

    p = sub.add_parser("diameter", help="projective diameter of a channel image")
    p.add_argument("channel", help="path to the channel (JSON)")
    p.add_argument("--cone", default="psd")
    p.add_argument("--shape", nargs=2, type=int, default=None, metavar=("D1", "D2"))
    p.add_argument("--samples", type=int, default=48)
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)

    p = sub.add_parser("check", help="randomized verification sweep")
    p.add_argument("--suite", required=True)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--dims", nargs="+", type=int, default=[2, 3])
    p.add_argument("--log", default=None, help="path for exploratory-row log lines")
    _add_common(p)

    p = sub.add_parser("synthesize",
                       help="construct a probabilistic map sending one state pair to another")
    p.add_argument("rho1")
    p.add_argument("rho2")
    p.add_argument("rho1p")
    p.add_argument("rho2p")
    _add_common(p)

    p = sub.add_parser("demo", help="worked-example reports")
    p.add_argument("--name", required=True,
                   help="data_hiding | werner_diameters | qubit_restriction | optimality")
    p.add_argument("--param", action="append", default=[],
                   metavar="KEY=VALUE", help="demo parameter override (repeatable)")
    _add_common(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _parse_params(pairs: list[str]) -> dict:
    params = {}
    for pair in pairs:
        if "=" not in pair:
            raise PayloadError(f"--param expects KEY=VALUE, got {pair!r}")
        key, raw = pair.split("=", 1)
        try:
            params[key] = json.loads(raw)
        except json.JSONDecodeError:
            params[key] = raw
    return params


def _build_request(args):
    if args.command == "hilbert":
        return "hilbert", HilbertRequest(
            cone=args.cone,
            shape=tuple(args.shape) if args.shape else None,
            a=_load_json(args.a),
            b=_load_json(args.b),
            tol=args.tol,
        )
    if args.command == "norm":
        return "norm", NormRequest(
            kind=args.kind,
            cone=args.cone,
            measurements=args.measurements,
            shape=tuple(args.shape) if args.shape else None,
            v=_load_json(args.v),
            solver_tol=args.solver_tol,
        )
    if args.command == "diameter":
        return "diameter", DiameterRequest(
            channel=_load_json(args.channel),
            cone=args.cone,
            shape=tuple(args.shape) if args.shape else None,
            samples=args.samples,
            refine=args.refine,
            seed=args.seed,
        )
    if args.command == "check":
        return "check", CheckRequest(suite=args.suite, n=args.n, seed=args.seed, dims=args.dims)
    if args.command == "synthesize":
        return "synthesize", SynthesizeRequest(
            rho1=_load_json(args.rho1),
            rho2=_load_json(args.rho2),
            rho1p=_load_json(args.rho1p),
            rho2p=_load_json(args.rho2p),
        )
    if args.command == "demo":
        return "demo", DemoRequest(name=args.name, params=_parse_params(args.param))
    raise PayloadError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        endpoint, request = _build_request(args)
        payload = _dispatch(endpoint, request, args.server)
    except (PayloadError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except IndeterminateError as exc:
        sys.stderr.write(f"indeterminate: {exc}\n")
        return EXIT_DOMAIN
    except DomainError as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN

    if args.command == "check" and getattr(args, "log", None):
        log_lines = payload.get("exploratory_log", [])
        Path(args.log).write_text("\n".join(log_lines) + ("\n" if log_lines else ""),
                                  encoding="utf-8")
        payload = {k: v for k, v in payload.items() if k != "exploratory_log"}

    _print(payload)
    if args.command == "check" and payload.get("certified_failures", 0) > 0:
        return EXIT_CHECK_FAILURE
    if args.command == "synthesize" and not payload.get("feasible", False):
        return EXIT_INFEASIBLE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
