"""HTTP surface: the scoring wire protocol over FastAPI.

    POST /v1/score   {"pairs": [{"query": q, "document": d}, ...]}
                  -> {"logits": [{"logit_pos": a, "logit_neg": b}, ...]}
    GET  /v1/health  -> {"status": "ok", "model": "<tag>"}

Both endpoints answer 503 until the model has loaded; schema violations
answer 400. Responses preserve request order and length.
"""

from __future__ import annotations

from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .config import AdapterConfig
from .model import RelevanceModel


class PairIn(BaseModel):
    query: str
    document: str


class ScoreRequest(BaseModel):
    pairs: list[PairIn]


def create_app(config: AdapterConfig, loader=RelevanceModel) -> FastAPI:
    """Build the service; the model loads on startup, not at import."""
    state: dict = {"model": None}

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        state["model"] = loader(config)
        yield
        state["model"] = None

    app = FastAPI(title="shoprank-adapter", lifespan=lifespan)

    @app.exception_handler(RequestValidationError)
    async def on_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc.errors()[:3])})

    def loading_response() -> JSONResponse:
        return JSONResponse(status_code=503, content={"error": "model loading"})

    @app.get("/v1/health")
    async def health():
        if state["model"] is None:
            return loading_response()
        return {"status": "ok", "model": config.tag}

    @app.post("/v1/score")
    async def score(request: ScoreRequest):
        model = state["model"]
        if model is None:
            return loading_response()
        pairs = [(pair.query, pair.document) for pair in request.pairs]
        logits = model.score_pairs(pairs)
        return {
            "logits": [
                {"logit_pos": logit_pos, "logit_neg": logit_neg}
                for logit_pos, logit_neg in logits
            ]
        }

    return app
