import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from src.repairforge.config import BRUTE_FORCE_HARD_CAP, config
from src.repairforge.conflicts.hypergraph import ConflictHypergraph, build_hypergraph
from src.repairforge.constraints.grounding import find_violations
from src.repairforge.constraints.model import DenialConstraint
from src.repairforge.core.model import Database, Fact, FactSet, sort_fact_sets
from src.repairforge.disjunctive.transversals import (
    minimal_transversals,
    minimum_transversal_size,
)
from src.repairforge.errors import LimitExceededError


class RepairKind(str, Enum):
    S_REPAIR = "s"
    C_REPAIR = "c"


@dataclass(frozen=True)
class RepairSet:
    """Repairs of `base`, largest world first."""
    kind: RepairKind
    worlds: tuple[FactSet, ...]
    base: Database

    def __post_init__(self):
        object.__setattr__(
            self, "worlds", tuple(sort_fact_sets(set(self.worlds), largest_first=True))
        )

    def __len__(self) -> int:
        return len(self.worlds)

    def __iter__(self):
        return iter(self.worlds)

    def world_set(self) -> set[FactSet]:
        return set(self.worlds)


def _guard_facts(db: Database, max_facts: int | None):
    limit = max_facts or config.max_facts
    if len(db) > limit:
        raise LimitExceededError("max_facts", limit, len(db))


def s_repairs(
    db: Database,
    constraints: Sequence[DenialConstraint],
    max_facts: int | None = None,
    max_worlds: int | None = None,
    graph: ConflictHypergraph | None = None,
) -> RepairSet:
    """Maximal consistent subsets, as complements of minimal transversals."""
    _guard_facts(db, max_facts)
    graph = graph or build_hypergraph(db, constraints)
    if not graph.edges:
        return RepairSet(RepairKind.S_REPAIR, (db.facts,), db)
    removals = minimal_transversals(
        graph.edges, max_results=max_worlds or config.max_worlds
    )
    worlds = tuple(db.facts - removed for removed in removals)
    logging.info("s_repairs: %d repairs of %d facts", len(worlds), len(db))
    return RepairSet(RepairKind.S_REPAIR, worlds, db)


def c_repairs(
    db: Database,
    constraints: Sequence[DenialConstraint],
    max_facts: int | None = None,
    max_worlds: int | None = None,
    graph: ConflictHypergraph | None = None,
) -> RepairSet:
    """S-repairs of maximum cardinality."""
    candidates = s_repairs(db, constraints, max_facts, max_worlds, graph)
    best = max(len(w) for w in candidates.worlds)
    worlds = tuple(w for w in candidates.worlds if len(w) == best)
    logging.info(
        "c_repairs: %d of %d repairs have %d facts", len(worlds), len(candidates), best
    )
    return RepairSet(RepairKind.C_REPAIR, worlds, db)


def repairs_of(
    db: Database,
    constraints: Sequence[DenialConstraint],
    kind: RepairKind,
    max_facts: int | None = None,
    max_worlds: int | None = None,
) -> RepairSet:
    enumerate_ = s_repairs if kind is RepairKind.S_REPAIR else c_repairs
    return enumerate_(db, constraints, max_facts, max_worlds)


def is_repair(
    m: Iterable[Fact],
    db: Database,
    constraints: Sequence[DenialConstraint],
    kind: RepairKind,
    graph: ConflictHypergraph | None = None,
) -> bool:
    """Membership test without enumerating the repairs.

    S-repairs: consistent, and every missing fact closes an edge. C-repairs:
    consistent, and |m| = |D| minus the size of a minimum transversal.
    """
    m = frozenset(m)
    if not m <= db.facts:
        return False
    graph = graph or build_hypergraph(db, constraints)
    if not graph.is_consistent(m):
        return False
    if kind is RepairKind.C_REPAIR:
        return len(m) == len(db) - minimum_transversal_size(graph.edges)
    return all(
        any(edge <= m | {t} for edge in graph.incidence(t)) for t in db.facts - m
    )


def brute_force_repairs(
    db: Database,
    constraints: Sequence[DenialConstraint],
    kind: RepairKind,
    cap: int | None = None,
) -> RepairSet:
    """Checks all 2^|D| subsets. Only meant for small instances."""
    cap = min(cap or config.brute_force_cap, BRUTE_FORCE_HARD_CAP)
    if len(db) > cap:
        raise LimitExceededError("brute_force_cap", cap, len(db))
    facts = sorted(db.facts)
    index = {f: i for i, f in enumerate(facts)}
    edges = [
        sum(1 << index[f] for f in violation)
        for c in constraints
        for violation in find_violations(c, db)
    ]
    bits = [1 << i for i in range(len(facts))]
    # inconsistent[mask]: some edge lies inside mask. Supersets inherit it.
    inconsistent = bytearray(1 << len(facts))
    for edge in edges:
        inconsistent[edge] = 1
    for mask in range(len(inconsistent)):
        if inconsistent[mask]:
            continue
        if any(mask & b and inconsistent[mask ^ b] for b in bits):
            inconsistent[mask] = 1

    consistent_masks = [mask for mask, bad in enumerate(inconsistent) if not bad]
    if kind is RepairKind.C_REPAIR:
        best = max(mask.bit_count() for mask in consistent_masks)
        chosen = [mask for mask in consistent_masks if mask.bit_count() == best]
    else:
        chosen = [
            mask
            for mask in consistent_masks
            if all(mask & b or inconsistent[mask | b] for b in bits)
        ]
    worlds = tuple(
        frozenset(f for i, f in enumerate(facts) if mask >> i & 1) for mask in chosen
    )
    return RepairSet(kind, worlds, db)
