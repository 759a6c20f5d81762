"""HTTP surface: one POST endpoint per operation, JSON in, JSON out.

Domain errors map to status 400 with a machine-readable code so thin
clients can translate them back into exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, service
from .words import EngineError, InputError, ResourceLimitError

app = FastAPI(
    title="pjohnson",
    version=__version__,
    description="Computational engine for free pro-p groups: truncated "
    "Magnus expansions, filtration degrees, Johnson tables, Massey values "
    "and p-period dynamics.",
)


@app.exception_handler(EngineError)
async def _engine_error(request: Request, exc: EngineError):
    if isinstance(exc, ResourceLimitError):
        code = "resource-limit"
    elif isinstance(exc, InputError):
        code = "user-error"
    else:
        code = "user-error"
    return JSONResponse(status_code=400, content={"detail": str(exc), "code": code})


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/v1/expand", response_model=service.ExpandResponse)
def expand(req: service.ExpandRequest):
    return service.handle_expand(req)


@app.post("/v1/eps", response_model=service.ScalarResponse)
def eps(req: service.EpsRequest):
    return service.handle_eps(req)


@app.post("/v1/degree", response_model=service.DegreeResponse)
def degree(req: service.DegreeRequest):
    return service.handle_degree(req)


@app.post("/v1/depth", response_model=service.DepthResponse)
def depth(req: service.DepthRequest):
    return service.handle_depth(req)


@app.post("/v1/johnson", response_model=service.TableResponse)
def johnson(req: service.TableRequest):
    return service.handle_johnson(req)


@app.post("/v1/jmap", response_model=service.TableResponse)
def jmap(req: service.TableRequest):
    return service.handle_jmap(req)


@app.post("/v1/massey", response_model=service.ScalarResponse)
def massey_value(req: service.MasseyRequest):
    return service.handle_massey(req)


@app.post("/v1/relators", response_model=service.RelatorsResponse)
def relators(req: service.RelatorsRequest):
    return service.handle_relators(req)


@app.post("/v1/check522", response_model=service.CheckResponse)
def check522(req: service.CheckRequest):
    return service.handle_check522(req)


@app.post("/v1/period", response_model=service.PeriodResponse)
def period(req: service.PeriodRequest):
    return service.handle_period(req)


@app.post("/v1/sequences", response_model=service.SequencesResponse)
def sequences(req: service.SequencesRequest):
    return service.handle_sequences(req)
