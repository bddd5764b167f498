from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import __version__, runner
from ..costing import CostError
from ..facts import FactsError
from ..model import ModelError
from ..oracle import OracleSizeError
from ..scenarios import FAMILIES, ScenarioError
from ..validator import PreconditionError
from .schemas import (
    CostRequest,
    ErrorResponse,
    OracleRequest,
    ScenarioResponse,
    SolveRequest,
    SolveResponse,
    ValidateRequest,
    ValidateResponse,
)

app = FastAPI(title="reconf", version=__version__)

_ERRORS = {422: {"model": ErrorResponse}}


@app.exception_handler(FactsError)
@app.exception_handler(CostError)
@app.exception_handler(ModelError)
@app.exception_handler(ScenarioError)
@app.exception_handler(OracleSizeError)
@app.exception_handler(PreconditionError)
async def _bad_input(request: Request, exc: Exception) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


def _opt(text: Optional[str], what: str):
    return runner.load_text(text, what) if text is not None else None


def _response(outcome: runner.Outcome) -> SolveResponse:
    return SolveResponse(**outcome.to_json(), facts=outcome.to_facts())


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


# sync handlers: the search is CPU bound and runs in the worker thread pool
@app.post("/solve", response_model=SolveResponse, responses=_ERRORS)
def solve(req: SolveRequest) -> SolveResponse:
    outcome = runner.solve(
        runner.load_text(req.instance, "instance"),
        runner.load_text(req.costs, "costs"),
        _opt(req.legacy, "legacy"),
        time_limit=req.time_limit,
        all_optimal=req.all_optimal,
    )
    return _response(outcome)


@app.post("/oracle", response_model=SolveResponse, responses=_ERRORS)
def oracle(req: OracleRequest) -> SolveResponse:
    outcome = runner.oracle(
        runner.load_text(req.instance, "instance"),
        runner.load_text(req.costs, "costs"),
        _opt(req.legacy, "legacy"),
        all_optimal=req.all_optimal,
    )
    return _response(outcome)


@app.post("/validate", response_model=ValidateResponse, responses=_ERRORS)
def validate(req: ValidateRequest) -> ValidateResponse:
    report = runner.validate(
        runner.load_text(req.instance, "instance"),
        runner.load_text(req.solution, "solution"),
        _opt(req.legacy, "legacy"),
        _opt(req.actions, "actions"),
    )
    return ValidateResponse(**report.to_json())


@app.post("/cost", response_model=SolveResponse, responses=_ERRORS)
def cost(req: CostRequest) -> SolveResponse:
    outcome = runner.price(
        runner.load_text(req.instance, "instance"),
        runner.load_text(req.solution, "solution"),
        runner.load_text(req.costs, "costs"),
        _opt(req.legacy, "legacy"),
        _opt(req.actions, "actions"),
    )
    return _response(outcome)


@app.get("/scenarios/{family}", response_model=ScenarioResponse, responses=_ERRORS)
def scenario(family: str, things: Optional[int] = Query(default=None, gt=0)) -> ScenarioResponse:
    if family not in FAMILIES:
        raise ScenarioError(f"unknown family {family!r}")
    return ScenarioResponse(family=family, files=runner.generate(family, things))
