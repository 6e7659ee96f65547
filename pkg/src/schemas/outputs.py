"""Wire shapes of every JSON document the command line emits."""

from pydantic import BaseModel, Field


class HypergraphDump(BaseModel):
    vertices: list[str] = Field(default_factory=list)
    edges: list[list[str]] = Field(default_factory=list)


class DisjunctiveDump(BaseModel):
    disjunctions: list[list[str]] = Field(default_factory=list)


class RepairsDump(BaseModel):
    kind: str
    worlds: list[list[str]] = Field(default_factory=list)


class BuildStats(BaseModel):
    """Counters collected while building a canonical disjunctive database."""
    mode: str = Field(default="eager")
    path: str = Field(default="algorithm1")
    iterations: int = Field(default=0)
    seeded: int = Field(default=0)
    generated: int = Field(default=0)
    subsumed: int = Field(default=0)
    peak_size: int = Field(default=0)
    removed_self_conflicting: int = Field(default=0)
    final_disjunctions: int = Field(default=0)
    final_size: int = Field(default=0)


class CheckReport(BaseModel):
    status: str
    kind: str
    worlds: int
    expected_disjunctions: int
    actual_disjunctions: int


class ErrorReport(BaseModel):
    error: str
    message: str
    details: dict = Field(default_factory=dict)
