"""HTTP surface: /predict speaking the masked-LM batch wire protocol, /health.

Request:  {"queries": [{"id": str, "tokens": [str, ...], "mask_position": int,
                        "top_k": int}]}
Response: {"results": [{"id": str, "mask_position": int,
                        "candidates": [{"token": str, "score": float}, ...]}]}

``id`` and ``mask_position`` are echoed verbatim, results keep request order,
and candidates arrive sorted by descending score, at most ``top_k`` of them
(capped server-side). Malformed bodies get 400 with an explanation; a batch
beyond the configured maximum gets 413; both endpoints answer 503 until the
model finishes loading.
"""

from __future__ import annotations

import json
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass
from typing import Any, Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .model import MaskFiller


@dataclass(frozen=True)
class ServerConfig:
    model_id: str = ""
    host: str = "127.0.0.1"
    port: int = 8765
    max_batch_size: int = 64
    top_k_cap: int = 50

    def __post_init__(self) -> None:
        if self.max_batch_size < 1:
            raise ValueError("max_batch_size must be at least 1")
        if self.top_k_cap < 1:
            raise ValueError("top_k_cap must be at least 1")


class _BadRequest(Exception):
    pass


def _validate_query(raw: Any, index: int, mask_token: str) -> tuple[str, list[str], int, int]:
    if not isinstance(raw, dict):
        raise _BadRequest(f"queries[{index}] is not an object")
    query_id = raw.get("id")
    if not isinstance(query_id, str):
        raise _BadRequest(f"queries[{index}].id must be a string")
    tokens = raw.get("tokens")
    if not isinstance(tokens, list) or not tokens or not all(isinstance(t, str) for t in tokens):
        raise _BadRequest(f"queries[{index}].tokens must be a non-empty list of strings")
    mask_position = raw.get("mask_position")
    if not isinstance(mask_position, int) or isinstance(mask_position, bool) or not (0 <= mask_position < len(tokens)):
        raise _BadRequest(f"queries[{index}].mask_position must index into tokens")
    if tokens[mask_position] != mask_token:
        raise _BadRequest(f"queries[{index}].tokens[{mask_position}] must be the mask token {mask_token!r}")
    top_k = raw.get("top_k", 1)
    if not isinstance(top_k, int) or isinstance(top_k, bool) or top_k < 1:
        raise _BadRequest(f"queries[{index}].top_k must be a positive integer")
    return query_id, tokens, mask_position, top_k


def create_app(
    config: ServerConfig,
    filler: MaskFiller | None = None,
    filler_factory: Callable[[], MaskFiller] | None = None,
) -> FastAPI:
    """Build the application around a mask filler.

    Pass ``filler`` for an already-loaded backend, or ``filler_factory`` to
    load one in the background after startup (health reports 503 meanwhile).
    Without either, the factory defaults to loading ``config.model_id`` as a
    pretrained checkpoint.
    """
    if filler is None and filler_factory is None:
        if not config.model_id:
            raise ValueError("a model identifier is required when no filler is supplied")

        def filler_factory() -> MaskFiller:
            from .model import TransformersMaskFiller

            return TransformersMaskFiller(config.model_id)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if filler is not None:
            app.state.filler = filler
        else:
            def load() -> None:
                app.state.filler = filler_factory()

            threading.Thread(target=load, daemon=True).start()
        yield

    app = FastAPI(lifespan=lifespan)
    app.state.filler = None
    app.state.config = config

    @app.get("/health")
    def health() -> PlainTextResponse:
        if app.state.filler is None:
            return PlainTextResponse("loading", status_code=503)
        return PlainTextResponse("ok")

    @app.post("/predict")
    async def predict(request: Request) -> JSONResponse:
        active: MaskFiller | None = app.state.filler
        if active is None:
            return PlainTextResponse("loading", status_code=503)
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            return PlainTextResponse("request body is not valid JSON", status_code=400)
        if not isinstance(body, dict) or not isinstance(body.get("queries"), list):
            return PlainTextResponse("request must be an object with a 'queries' list", status_code=400)
        queries = body["queries"]
        if len(queries) > config.max_batch_size:
            return PlainTextResponse(
                f"batch of {len(queries)} exceeds the maximum of {config.max_batch_size}", status_code=413
            )
        results = []
        for index, raw in enumerate(queries):
            try:
                query_id, tokens, mask_position, top_k = _validate_query(raw, index, active.mask_token)
            except _BadRequest as exc:
                return PlainTextResponse(str(exc), status_code=400)
            top_k = min(top_k, config.top_k_cap)
            candidates = active.fill(tokens, mask_position, top_k, query_id=query_id)
            results.append(
                {
                    "id": query_id,
                    "mask_position": mask_position,
                    "candidates": [{"token": token, "score": score} for token, score in candidates[:top_k]],
                }
            )
        return JSONResponse({"results": results})

    return app
