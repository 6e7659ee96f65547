"""Text and JSON renderings of everything the command line prints.

JSON documents are pydantic models from `src.schemas.outputs`, serialized
with orjson so the bytes are stable from run to run.
"""

import orjson
from pydantic import BaseModel

from src.repairforge.conflicts.hypergraph import ConflictHypergraph
from src.repairforge.core.model import FactSet
from src.repairforge.disjunctive.database import DisjunctiveDatabase, render_disjunctive
from src.repairforge.repairs.enumeration import RepairSet
from src.schemas.outputs import (
    CheckReport,
    DisjunctiveDump,
    ErrorReport,
    HypergraphDump,
    RepairsDump,
)


def dump_json(model: BaseModel) -> str:
    return orjson.dumps(model.model_dump(), option=orjson.OPT_INDENT_2).decode() + "\n"


def _strings(facts: FactSet) -> list[str]:
    return [str(f) for f in sorted(facts)]


def hypergraph_dump(graph: ConflictHypergraph) -> HypergraphDump:
    return HypergraphDump(
        vertices=[str(v) for v in sorted(graph.vertices)],
        edges=[_strings(e) for e in graph.edges],
    )


def disjunctive_dump(dd: DisjunctiveDatabase) -> DisjunctiveDump:
    return DisjunctiveDump(disjunctions=[_strings(s) for s in dd.fact_sets()])


def repairs_dump(repairs: RepairSet) -> RepairsDump:
    return RepairsDump(kind=repairs.kind.value, worlds=[_strings(w) for w in repairs])


def render_world(world: FactSet) -> str:
    facts = ", ".join(str(f) for f in sorted(world))
    return f"#{len(world)}: {facts}".rstrip()


def render_repairs_text(repairs: RepairSet) -> str:
    return "".join(render_world(w) + "\n" for w in repairs)


def render_disjunctive_db(dd: DisjunctiveDatabase, fmt: str) -> str:
    if fmt == "json":
        return dump_json(disjunctive_dump(dd))
    return render_disjunctive(dd)


def render_repairs(repairs: RepairSet, fmt: str) -> str:
    if fmt == "json":
        return dump_json(repairs_dump(repairs))
    return render_repairs_text(repairs)


def render_check(report: CheckReport, fmt: str) -> str:
    if fmt == "json":
        return dump_json(report)
    return (
        f"{report.status}: {report.worlds} {report.kind}-repairs, "
        f"{report.expected_disjunctions} expected disjunctions, "
        f"{report.actual_disjunctions} built\n"
    )


def render_error(error: Exception, details: dict, fmt: str) -> str:
    if fmt == "json":
        report = ErrorReport(
            error=type(error).__name__, message=str(error), details=details
        )
        return orjson.dumps(report.model_dump()).decode() + "\n"
    return f"error: {error}\n"
