"""HTTP service wrapping the explanation pipeline.

The service is stateless apart from an in-memory registry of validated
networks: evidence travels with every explain request, so a what-if UI
stays correct across reconnects and interleaved clients. Registry ids
are content-addressed, which makes registration idempotent.
"""

from __future__ import annotations

import hashlib
import json
import threading

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .errors import (
    BnExplainError,
    ConfigError,
    InconsistentEvidenceError,
    NetworkFormatError,
    NetworkValidationError,
)
from .explain import DEFAULT_ALPHA_LADDER, ExplainConfig, explain
from .model import EvidenceSet, Network, NodeKind, network_from_dict, serialize_network
from .render import RenderConfig, render
from .report import REPORT_VERSION, report_to_dict


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _bad_request(message: str) -> _ApiError:
    return _ApiError(400, "malformed_payload", message)


def _unprocessable(message: str) -> _ApiError:
    return _ApiError(422, "invalid_request", message)


class NetworkRegistry:
    """Thread-safe id → Network map; ids are derived from content."""

    def __init__(self):
        self._lock = threading.Lock()
        self._networks: dict[str, Network] = {}

    def register(self, net: Network) -> str:
        canonical = json.dumps(serialize_network(net), sort_keys=True)
        net_id = "net-" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]
        with self._lock:
            self._networks[net_id] = net
        return net_id

    def get(self, net_id: str) -> Network:
        with self._lock:
            net = self._networks.get(net_id)
        if net is None:
            raise _ApiError(404, "unknown_network", f"no network registered under {net_id!r}")
        return net

    def evict(self, net_id: str) -> bool:
        with self._lock:
            return self._networks.pop(net_id, None) is not None


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise _bad_request(f"request body is not valid JSON: {exc}") from None
    if not isinstance(obj, dict):
        raise _bad_request("request body must be a JSON object")
    return obj


def _node_metadata(net: Network) -> list[dict]:
    entries = []
    for node in net.nodes:
        entry = {
            "id": node.id,
            "label": node.label,
            "kind": node.kind.value,
            "states": list(node.states),
            "parents": list(node.parents),
        }
        if node.kind is NodeKind.BINNED_CONTINUOUS:
            entry["bin_edges"] = list(node.bin_edges or ())
        entries.append(entry)
    return entries


def _explain_config(raw: dict) -> tuple[ExplainConfig, int, RenderConfig]:
    level = raw.get("level", 3)
    if level not in (1, 2, 3):
        raise _unprocessable(f'"level" must be 1, 2 or 3, got {level!r}')
    config = raw.get("config", {})
    if not isinstance(config, dict):
        raise _bad_request('"config" must be an object')

    ladder = config.get("alpha_ladder", list(DEFAULT_ALPHA_LADDER))
    if not isinstance(ladder, list) or not all(
        isinstance(a, (int, float)) and not isinstance(a, bool) for a in ladder
    ):
        raise _bad_request('"alpha_ladder" must be an array of numbers')
    metric = config.get("metric", "hellinger")
    if metric not in ("hellinger", "kl"):
        raise _unprocessable(f'"metric" must be "hellinger" or "kl", got {metric!r}')
    focus = config.get("focus_states", {})
    if not isinstance(focus, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in focus.items()
    ):
        raise _bad_request('"focus_states" must map node ids to state names')
    precision = config.get("percent_precision", 0)
    if not isinstance(precision, int) or isinstance(precision, bool) or precision < 0:
        raise _unprocessable('"percent_precision" must be a non-negative integer')
    baseline = config.get("baseline_label", "an average patient")
    if not isinstance(baseline, str):
        raise _bad_request('"baseline_label" must be a string')
    phrases = config.get("risk_phrases", {})
    if not isinstance(phrases, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in phrases.items()
    ):
        raise _bad_request('"risk_phrases" must map node ids to phrases')

    try:
        explain_config = ExplainConfig(
            alpha_ladder=tuple(float(a) for a in ladder),
            metric=metric,
            focus_states=dict(focus),
        )
        render_config = RenderConfig(
            level=level,
            percent_precision=precision,
            baseline_label=baseline,
            risk_phrases=dict(phrases),
            focus_states=dict(focus),
        )
    except ConfigError as exc:
        raise _unprocessable(str(exc)) from None
    return explain_config, level, render_config


def create_app() -> FastAPI:
    app = FastAPI(title="bnexplain", version="1.0")
    # The browser client may be served from a different origin in
    # development; the API carries no credentials or server-side state.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = NetworkRegistry()

    @app.exception_handler(_ApiError)
    async def _api_error_handler(request: Request, exc: _ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"code": exc.code, "message": exc.message}},
        )

    @app.post("/v1/networks", status_code=201)
    async def register_network(request: Request):
        body = await _json_body(request)
        try:
            net = network_from_dict(body)
        except (NetworkFormatError, NetworkValidationError) as exc:
            raise _bad_request(str(exc)) from None
        net_id = registry.register(net)
        return {"id": net_id, "name": net.name, "node_count": len(net.nodes)}

    @app.get("/v1/networks/{net_id}")
    async def network_metadata(net_id: str):
        net = registry.get(net_id)
        return {"id": net_id, "name": net.name, "nodes": _node_metadata(net)}

    @app.delete("/v1/networks/{net_id}", status_code=204)
    async def evict_network(net_id: str):
        if not registry.evict(net_id):
            raise _ApiError(404, "unknown_network", f"no network registered under {net_id!r}")
        return Response(status_code=204)

    @app.post("/v1/networks/{net_id}/explain")
    async def explain_network(net_id: str, request: Request):
        net = registry.get(net_id)
        body = await _json_body(request)

        raw_evidence = body.get("evidence")
        if not isinstance(raw_evidence, dict):
            raise _bad_request('"evidence" must be an object mapping node ids to values')
        if not raw_evidence:
            raise _unprocessable("evidence required: the evidence map must not be empty")
        targets = body.get("targets")
        if (
            not isinstance(targets, list)
            or not targets
            or not all(isinstance(t, str) for t in targets)
        ):
            raise _unprocessable('"targets" must be a non-empty array of node ids')

        explain_config, level, render_config = _explain_config(body)
        try:
            evidence = EvidenceSet.build(net, raw_evidence)
            reports = explain(net, evidence, targets, explain_config)
        except InconsistentEvidenceError as exc:
            raise _ApiError(409, "inconsistent_evidence", str(exc)) from None
        except BnExplainError as exc:
            raise _unprocessable(str(exc)) from None

        rendered = []
        for report in reports:
            result = render(report, render_config)
            rendered.append(
                {
                    "target": report.target,
                    "text": result.text,
                    "structured": result.structured,
                }
            )
        return {
            "report_version": REPORT_VERSION,
            "reports": [report_to_dict(r) for r in reports],
            "rendered": rendered,
        }

    return app
