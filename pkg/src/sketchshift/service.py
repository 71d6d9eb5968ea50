"""HTTP service exposing the shift query over a stable JSON contract.

Routes are versioned under /v1. The service holds no per-request state:
replies are a pure function of (request body, loaded artifacts), and the
reply's request_id is a content hash so identical requests produce
byte-identical bodies.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .artifacts import Artifacts
from .engine import Novelty, ShiftResponse, conceptual_shift
from .errors import (
    DegenerateSketch,
    EmptySketch,
    UnknownCategory,
    UnknownSketchRef,
)
from .sketch import Sketch, normalize_label, sketch_from_drawing, sketch_to_drawing

access_log = logging.getLogger("sketchshift.access")

NOVELTY_TOKENS = {n.value for n in Novelty}


class ShiftRequest(BaseModel):
    label: str
    strokes: list[list[list[float]]]
    novelty: str


class ShiftReply(BaseModel):
    target_label: str
    novelty: str
    visual_similarity: float
    conceptual_similarity: float
    composite: float
    fallback_used: bool
    sketch: list[list[list[int]]]
    request_id: str


class ServiceError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


def make_reply(result: ShiftResponse, novelty: str, request_id: str) -> ShiftReply:
    return ShiftReply(
        target_label=result.label,
        novelty=novelty,
        visual_similarity=result.candidate.visual_sim,
        conceptual_similarity=result.candidate.conceptual_sim,
        composite=result.candidate.composite,
        fallback_used=result.fallback_used,
        sketch=sketch_to_drawing(result.sketch),
        request_id=request_id,
    )


def request_digest(index_digest: str, req: ShiftRequest) -> str:
    canonical = json.dumps(
        {"label": req.label, "novelty": req.novelty, "strokes": req.strokes},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(f"{index_digest}|{canonical}".encode("utf-8")).hexdigest()[:16]


def request_to_sketch(req: ShiftRequest) -> Sketch:
    if not req.strokes:
        raise ServiceError(422, "invalid_strokes", "strokes must be non-empty")
    drawing = []
    for stroke in req.strokes:
        if len(stroke) != 2 or len(stroke[0]) != len(stroke[1]) or not stroke[0]:
            raise ServiceError(
                422, "invalid_strokes",
                "each stroke must be two parallel non-empty coordinate arrays",
            )
        xs = [int(round(v)) for v in stroke[0]]
        ys = [int(round(v)) for v in stroke[1]]
        drawing.append([xs, ys])
    return sketch_from_drawing(req.label, drawing, source_id="request")


def create_app(artifacts: Artifacts | None) -> FastAPI:
    app = FastAPI(title="sketchshift", docs_url=None, redoc_url=None)
    app.state.artifacts = artifacts
    app.state.started = time.monotonic()
    # the canvas client is typically served from another local origin
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        code = "bad_json" if any(
            e.get("type") == "json_invalid" for e in exc.errors()
        ) else "bad_request"
        return JSONResponse(status_code=400, content={
            "error_code": code, "detail": str(exc.errors()[:3]),
        })

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content={
            "error_code": exc.code, "detail": exc.message,
        })

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        t0 = time.perf_counter()
        response = await call_next(request)
        access_log.info(json.dumps({
            "method": request.method,
            "path": request.url.path,
            "status": response.status_code,
            "duration_ms": round((time.perf_counter() - t0) * 1000.0, 3),
        }))
        return response

    @app.post("/v1/shift", response_model=ShiftReply)
    def shift(req: ShiftRequest) -> ShiftReply:
        bundle = _require_artifacts(app)
        if req.novelty not in NOVELTY_TOKENS:
            raise ServiceError(400, "bad_novelty",
                               f"novelty must be one of {sorted(NOVELTY_TOKENS)}")
        if not req.label.strip():
            raise ServiceError(404, "unknown_category", "label is empty")
        sketch = request_to_sketch(req)
        if normalize_label(req.label) not in bundle.index.model.categories:
            raise ServiceError(404, "unknown_category",
                               f"'{normalize_label(req.label)}' is not in the index")
        try:
            result = conceptual_shift(
                sketch, Novelty(req.novelty),
                bundle.index, bundle.store, bundle.corpus,
            )
        except (DegenerateSketch, EmptySketch) as exc:
            raise ServiceError(422, "degenerate_sketch", str(exc)) from None
        except UnknownCategory as exc:
            raise ServiceError(404, "unknown_category", str(exc)) from None
        except UnknownSketchRef as exc:
            raise ServiceError(422, "unresolvable_sketch", str(exc)) from None
        return make_reply(result, req.novelty, request_digest(bundle.index_digest, req))

    @app.get("/v1/categories")
    def categories():
        bundle = _require_artifacts(app)
        return {
            "categories": bundle.index.labels(),
            "k": bundle.index.k,
            "extractor": {
                "kind": bundle.index.extractor.kind,
                "dimension": bundle.index.extractor.dimension,
                "version": bundle.index.extractor.version,
            },
        }

    @app.get("/healthz")
    def healthz():
        bundle: Artifacts | None = app.state.artifacts
        return {
            "status": "ok",
            "index_version": bundle.index.version if bundle else None,
            "uptime_seconds": time.monotonic() - app.state.started,
        }

    return app


def _require_artifacts(app: FastAPI) -> Artifacts:
    bundle: Artifacts | None = app.state.artifacts
    if bundle is None:
        raise ServiceError(503, "index_not_loaded", "no index loaded")
    return bundle
