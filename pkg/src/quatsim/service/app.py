"""FastAPI application wrapping the core package.

Run with ``uvicorn quatsim.service:app``.  Request bodies that fail schema
validation return 422 (FastAPI default); mathematically invalid objects and
domain errors return 400 with the violated invariant named.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.requests import Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import QuatsimError
from . import api, models

app = FastAPI(
    title="quatsim",
    version=__version__,
    description="Quaternionic quantum states, POVMs, and Kraus channels, "
                "with exact simulation inside complex quantum mechanics.",
)


@app.exception_handler(QuatsimError)
async def _domain_error(_: Request, exc: QuatsimError) -> JSONResponse:
    detail = {"error": type(exc).__name__, "detail": str(exc)}
    invariant = getattr(exc, "invariant", None)
    if invariant is not None:
        detail["invariant"] = invariant
    residual = getattr(exc, "residual", None)
    if residual is not None:
        detail["residual"] = residual
    return JSONResponse(status_code=400, content=detail)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/verify", response_model=models.VerifyReport,
          response_model_by_alias=True)
def verify(req: models.VerifyRequest) -> models.VerifyReport:
    return api.run_verify(req)


@app.post("/simulate", response_model=models.SimulateResponse,
          response_model_by_alias=True)
def simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    return api.run_simulate(req)


@app.post("/embed", response_model=models.EmbedResponse,
          response_model_by_alias=True)
def embed(req: models.EmbedRequest) -> models.EmbedResponse:
    return api.run_embed(req)


@app.post("/tomography", response_model=models.TomographyResponse,
          response_model_by_alias=True)
def tomography(req: models.TomographyRequest) -> models.TomographyResponse:
    return api.run_tomography(req)


@app.get("/basis/{dim}", response_model=models.BasisFile,
         response_model_by_alias=True)
def basis(dim: int) -> models.BasisFile:
    return api.make_basis(dim)
