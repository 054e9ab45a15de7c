"""Command-line front door; a thin client over the service layer.

Subcommands mirror the HTTP endpoints one to one: a config file is just a
serialized request body.  By default requests are served in-process; with
``--server URL`` the same JSON is POSTed to a running instance instead.

Exit codes: 0 success, 2 configuration or validation problems, 3 runtime
regularity failures (degenerate spectra, aborted trajectories).  ``verify``
exits 1 when a check fails; the failure details live in the report.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

from pydantic import ValidationError

from .errors import CnDualityError, IntegrationAborted, RegularityViolation
from .service.handlers import handle_dualize, handle_simulate, handle_verify
from .service.models import (
    DualizeRequest,
    DualizeResponse,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_REGULARITY = 3


class _ConfigError(Exception):
    pass


class _ServerError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(f"server returned {status}: {detail}")
        self.status = status


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise _ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise _ConfigError("config must be a flat JSON object")
    return cfg


def _parse_tol(items: list[str] | None) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise _ConfigError(f"--tol expects name=value, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise _ConfigError(f"--tol {name}: {value!r} is not a number") from exc
    return out


def _post_json(server: str, path: str, payload: dict) -> dict:
    url = server.rstrip("/") + path
    req = urllib.request.Request(
        url,
        data=json.dumps(payload).encode(),
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        raise _ServerError(exc.code, exc.read().decode(errors="replace")) from exc
    except urllib.error.URLError as exc:
        raise _ConfigError(f"cannot reach server {server}: {exc.reason}") from exc


def _write_bytes(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(text.encode())


def _write_json(path: Path, payload: dict) -> None:
    _write_bytes(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# simulate


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    tol = dict(cfg.get("tolerances") or {})
    tol.update(_parse_tol(args.tol))
    cfg["tolerances"] = tol
    try:
        req = SimulateRequest(**cfg)
    except (ValidationError, TypeError) as exc:
        raise _ConfigError(f"invalid simulate config: {exc}") from exc

    if args.server:
        resp = SimulateResponse.model_validate(_post_json(args.server, "/simulate", req.model_dump()))
    else:
        resp = handle_simulate(req)

    out = Path(args.out)
    paths: dict[str, str] = {}
    for run in resp.runs:
        path = out if len(resp.runs) == 1 else out.with_name(f"{out.stem}_{run.solver}{out.suffix}")
        _write_bytes(path, run.csv)
        paths[run.solver] = str(path)
        if args.emit_plot_data:
            plot_lines = []
            for line in run.csv.splitlines()[1:]:
                cells = line.split(",")
                plot_lines.append(" ".join(cells[: 2 * resp.n + 1]))
            _write_bytes(path.with_suffix(path.suffix + ".plot.dat"), "\n".join(plot_lines) + "\n")

    sidecar_path = args.sidecar
    if sidecar_path is None and (len(resp.runs) > 1 or resp.status == "aborted"):
        sidecar_path = str(out) + ".meta.json"
    if sidecar_path:
        sidecar = {
            "config": resp.config,
            "status": resp.status,
            "deviation": resp.deviation,
            "runs": [
                {
                    "solver": run.solver,
                    "path": paths[run.solver],
                    "rows": run.rows,
                    "energy_drift": run.energy_drift,
                    "action_drift": run.action_drift,
                    "aborted": run.aborted,
                    "abort_reason": run.abort_reason,
                    "last_safe_t": run.last_safe_t,
                }
                for run in resp.runs
            ],
        }
        _write_json(Path(sidecar_path), sidecar)

    for run in resp.runs:
        note = f" (aborted at last safe t={run.last_safe_t})" if run.aborted else ""
        print(
            f"{run.solver}: {run.rows} rows -> {paths[run.solver]}"
            f" energy_drift={run.energy_drift:.3e} action_drift={run.action_drift:.3e}{note}"
        )
    if resp.deviation is not None:
        print(f"solver deviation: {resp.deviation:.3e}")
    if resp.status == "aborted":
        print("trajectory aborted before t_end; partial file written", file=sys.stderr)
        return EXIT_REGULARITY
    return EXIT_OK


# ---------------------------------------------------------------------------
# dualize


def _dualize_request(cfg: dict, state, direction: str | None) -> DualizeRequest:
    if direction is None:
        model = cfg.get("model")
        if model == "sutherland":
            direction = "s2r"
        elif model == "rsvd":
            direction = "r2s"
        else:
            raise _ConfigError("give --direction or set model to sutherland/rsvd in the config")
    try:
        return DualizeRequest(
            direction=direction,
            n=cfg.get("n", len(state) // 2),
            g=cfg["g"],
            g2=cfg["g2"],
            state=state,
        )
    except (ValidationError, TypeError, KeyError) as exc:
        raise _ConfigError(f"invalid dualize config: {exc}") from exc


def _cmd_dualize(args) -> int:
    cfg = _load_config(args.config)
    if "states" in cfg:
        states = cfg["states"]
    elif "state" in cfg:
        states = [cfg["state"]]
    elif "initial_state" in cfg:
        states = [cfg["initial_state"]]
    else:
        raise _ConfigError("dualize config needs a 'state', 'initial_state' or 'states' entry")
    if not isinstance(states, list) or not states:
        raise _ConfigError("'states' must be a non-empty list")

    for state in states:
        req = _dualize_request(cfg, state, args.direction)
        if args.server:
            resp = DualizeResponse.model_validate(_post_json(args.server, "/dualize", req.model_dump()))
        else:
            resp = handle_dualize(req)
        print(json.dumps(resp.model_dump(), sort_keys=True))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _cmd_verify(args) -> int:
    try:
        req = VerifyRequest(
            seed=args.seed, n_max=args.n_max, draws=args.draws, tolerances=_parse_tol(args.tol)
        )
    except ValidationError as exc:
        raise _ConfigError(f"invalid verify options: {exc}") from exc

    if args.server:
        resp = VerifyResponse.model_validate(_post_json(args.server, "/verify", req.model_dump()))
    else:
        resp = handle_verify(req)

    for check in resp.checks:
        flag = "PASS" if check.passed else "FAIL"
        print(
            f"{flag} {check.name}: residual {check.max_residual:.3e}"
            f" <= {check.tolerance:.1e} [{check.identity}]"
        )
    print(f"{'all checks passed' if resp.overall_pass else 'CHECK FAILURES PRESENT'}"
          f" ({len(resp.checks)} checks, seed={resp.seed})")
    if args.report:
        _write_json(Path(args.report), resp.model_dump())
    return EXIT_OK if resp.overall_pass else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# serve


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cn-duality",
        description="Simulate, dualize and verify the dual pair of integrable models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="sample a trajectory and write CSV")
    p_sim.add_argument("--config", required=True, help="flat JSON request file")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--sidecar", help="also write a JSON sidecar with diagnostics")
    p_sim.add_argument("--emit-plot-data", action="store_true",
                       help="write plain x/y columns next to each CSV")
    p_sim.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="tolerance override (e.g. rk4_dt=1e-3); repeatable")
    p_sim.add_argument("--server", help="POST to a running service instead of in-process")
    p_sim.set_defaults(fn=_cmd_simulate)

    p_dual = sub.add_parser("dualize", help="map states across the duality")
    p_dual.add_argument("--config", required=True)
    p_dual.add_argument("--direction", choices=["s2r", "r2s"])
    p_dual.add_argument("--server")
    p_dual.set_defaults(fn=_cmd_dualize)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--n-max", type=int, default=4, dest="n_max")
    p_ver.add_argument("--draws", type=int, default=40)
    p_ver.add_argument("--report", help="write the JSON report here")
    p_ver.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="per-check tolerance override; repeatable")
    p_ver.add_argument("--server")
    p_ver.set_defaults(fn=_cmd_verify)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(fn=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _ServerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGULARITY if exc.status == 409 else EXIT_CONFIG
    except (RegularityViolation, IntegrationAborted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGULARITY
    except CnDualityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
