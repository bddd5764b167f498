"""Request and response bodies. Fact files travel as text."""
from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Body(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")


class SolveRequest(_Body):
    instance: str = Field(description="Instance facts")
    costs: str = Field(description="Cost weight facts")
    legacy: Optional[str] = Field(default=None, description="legacyConfig facts; omit for a plain configuration")
    time_limit: float = Field(default=60.0, gt=0, le=3600, alias="timeLimit")
    all_optimal: int = Field(default=0, ge=0, le=10_000, alias="allOptimal")


class OracleRequest(_Body):
    instance: str
    costs: str
    legacy: Optional[str] = None
    all_optimal: int = Field(default=0, ge=0, le=10_000, alias="allOptimal")


class ValidateRequest(_Body):
    instance: str
    solution: str
    legacy: Optional[str] = None
    actions: Optional[str] = None


class CostRequest(ValidateRequest):
    costs: str


class CostItem(BaseModel):
    atom: str
    cost: int


class Cost(BaseModel):
    total: int
    items: list[CostItem]


class ConfigurationOut(BaseModel):
    cabinets: list[int]
    rooms: list[int]
    cabinetHigh: list[int]
    cabinetSmall: list[int]
    cabinetTOthing: list[list[int]]
    roomTOcabinet: list[list[int]]
    personTOroom: list[list[int]]


class Actions(BaseModel):
    reuse: list[str]
    delete: list[str]
    create: list[str]


class Stats(BaseModel):
    nodes: int
    elapsedMs: float
    incumbents: int


class SolveResponse(BaseModel):
    status: str
    cost: Optional[Cost] = None
    configuration: Optional[ConfigurationOut] = None
    actions: Optional[Actions] = None
    stats: Stats
    optima: Optional[list[ConfigurationOut]] = None
    facts: str = Field(description="The result as a fact file")


class ViolationOut(BaseModel):
    check: str
    atoms: list[str]
    message: str


class ValidateResponse(BaseModel):
    valid: bool
    violations: list[ViolationOut]


class ScenarioResponse(BaseModel):
    family: Literal["empty", "long", "newroom", "swap"]
    files: dict[str, str]


class ErrorResponse(BaseModel):
    detail: str
