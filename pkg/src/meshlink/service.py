"""Stateless HTTP service backing the web planner.

Endpoints
    GET  /presets   modem preset catalog
    GET  /models    named path-loss and radio models
    POST /assess    scenario document -> link assessments + connectivity + plan summary
    POST /sweep     sweep request -> sweep result

Every response is JSON and carries schema_version. Requests never touch
shared mutable state, so the threading server needs no locks.
"""

from __future__ import annotations

import json
import mimetypes
from dataclasses import asdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import guided_link as gl
from . import phy, planner, propagation
from .planner import ScenarioError
from .presets import catalog_to_json, power_by_name, preset_by_name

SCHEMA_VERSION = "1"


class ApiError(Exception):
    def __init__(self, message: str, field: str | None = None, status: int = 400):
        super().__init__(message)
        self.field = field
        self.status = status


def handle_presets() -> dict:
    return {"schema_version": SCHEMA_VERSION, "presets": catalog_to_json()}


def handle_models() -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "path_loss_models": {
            name: propagation.model_to_dict(model)
            for name, model in sorted(propagation.MODEL_PRESETS.items())
        },
        "radio_models": {"sx1262-default": phy.radio_model_to_dict(phy.default_radio_model())},
    }


def handle_assess(body: dict) -> dict:
    try:
        scenario = planner.scenario_from_dict(body)
    except ScenarioError as exc:
        raise ApiError(str(exc), field=exc.field) from None
    links = planner.assess_links(scenario) if len(scenario.nodes) >= 2 else []
    conn = planner.connectivity(scenario)
    return {
        "schema_version": SCHEMA_VERSION,
        "links": [asdict(link) for link in links],
        "connectivity": {
            "components": conn.components,
            "reachable": conn.reachable,
            "hop_counts": conn.hop_counts,
        },
        "plan_summary": planner.plan_summary(scenario),
    }


def handle_sweep(body: dict) -> dict:
    if not isinstance(body, dict):
        raise ApiError("request body must be a JSON object")
    try:
        preset = preset_by_name(str(body.get("preset", "")))
    except ValueError as exc:
        raise ApiError(str(exc), field="preset") from None
    try:
        power = power_by_name(str(body.get("power", "Max")))
    except ValueError as exc:
        raise ApiError(str(exc), field="power") from None
    model_doc = body.get("model", phy.EMPIRICAL)
    try:
        if isinstance(model_doc, str):
            if model_doc not in (phy.DATASHEET, phy.EMPIRICAL):
                raise ValueError(f"unknown model {model_doc!r}; choose datasheet or empirical")
            model = phy.default_radio_model(model_doc)
        elif isinstance(model_doc, dict):
            model = phy.radio_model_from_dict(model_doc)
        else:
            raise ValueError("model must be a name or an object")
    except ValueError as exc:
        raise ApiError(str(exc), field="model") from None
    try:
        seed = int(body.get("seed", 0))
        packets = int(body.get("packets", gl.DEFAULT_PACKETS_PER_BURST))
        payload_bytes = int(body.get("payload_bytes", gl.DEFAULT_PAYLOAD_BYTES))
        insertion = float(body.get("insertion_loss_db", gl.DEFAULT_INSERTION_LOSS_DB))
        fixed = body.get("fixed_attenuation_db")
        if fixed is None:
            chain = gl.auto_chain(preset, power, model, insertion_loss_db=insertion)
        else:
            chain = gl.AttenuatorChain(
                fixed_stages_db=(float(fixed),), insertion_loss_db=insertion
            )
        result = gl.run_sweep(
            preset,
            power,
            chain,
            model,
            seed=seed,
            packets=packets,
            payload_bytes=payload_bytes,
            run_id=f"{preset.name}-{power.label}",
            collect_packets=False,
        )
    except (TypeError, ValueError) as exc:
        raise ApiError(str(exc)) from None
    return gl.sweep_result_to_dict(result)


class _Handler(BaseHTTPRequestHandler):
    server_version = "meshlink"
    ui_dir: Path | None = None

    # -- helpers -----------------------------------------------------------
    def _send_json(self, status: int, doc: dict) -> None:
        payload = json.dumps(doc, indent=2).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(payload)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(payload)

    def _send_error_json(self, exc: ApiError) -> None:
        error: dict = {"message": str(exc)}
        if exc.field:
            error["field"] = exc.field
        self._send_json(exc.status, {"schema_version": SCHEMA_VERSION, "error": error})

    def _read_body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        if not raw:
            raise ApiError("empty request body")
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(f"invalid JSON body: {exc}") from None

    def _serve_static(self, path: str) -> bool:
        if self.ui_dir is None:
            return False
        relative = path.lstrip("/") or "index.html"
        target = (self.ui_dir / relative).resolve()
        if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
            return False
        payload = target.read_bytes()
        mime = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self.send_response(200)
        self.send_header("Content-Type", mime)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)
        return True

    # -- verbs -------------------------------------------------------------
    def do_GET(self) -> None:  # noqa: N802 (http.server API)
        path = self.path.split("?", 1)[0]
        if path == "/presets":
            self._send_json(200, handle_presets())
        elif path == "/models":
            self._send_json(200, handle_models())
        elif self._serve_static(path):
            pass
        else:
            self._send_error_json(ApiError("unknown route", status=404))

    def do_POST(self) -> None:  # noqa: N802
        path = self.path.split("?", 1)[0]
        try:
            if path == "/assess":
                self._send_json(200, handle_assess(self._read_body()))
            elif path == "/sweep":
                self._send_json(200, handle_sweep(self._read_body()))
            else:
                raise ApiError("unknown route", status=404)
        except ApiError as exc:
            self._send_error_json(exc)

    def do_OPTIONS(self) -> None:  # noqa: N802
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        pass


def make_server(
    host: str = "127.0.0.1", port: int = 0, ui_dir: str | None = None
) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"ui_dir": Path(ui_dir) if ui_dir else None})
    return ThreadingHTTPServer((host, port), handler)
