from __future__ import annotations

from pydantic import BaseModel, Field


class TraceRecord(BaseModel):
    step: int
    rule: str
    position: list[int]
    term: str


class EncodeReport(BaseModel):
    direction: str
    input_term: str
    output_term: str
    erasers: int = 0
    duplicators: int = 0


class GraphSummary(BaseModel):
    nodes: int
    edges: int
    normal_forms: list[str] = Field(default_factory=list)
    acyclic: bool
    cycle: list[str] | None = None
    truncated_by_fuel: bool = False
    truncated_by_nodes: bool = False


class SimulationReport(BaseModel):
    redex: str = ""
    success: bool
    steps: int
    trace: list[TraceRecord] = Field(default_factory=list)
    message: str = ""
    via_closure: bool = False


class WitnessReport(BaseModel):
    steps_taken: int
    ok: bool
    violation: str | None = None
    final_term: str


class DerivationNode(BaseModel):
    rule: str
    sequent: str
    premises: list["DerivationNode"] = Field(default_factory=list)


DerivationNode.model_rebuild()


class CheckReport(BaseModel):
    ok: bool
    calculus: str
    term: str
    diagnostics: list[str] = Field(default_factory=list)
