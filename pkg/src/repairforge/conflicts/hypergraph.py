import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

from src.repairforge.constraints.grounding import find_violations
from src.repairforge.constraints.model import DenialConstraint
from src.repairforge.core.model import Database, Fact, FactSet, sort_fact_sets
from src.repairforge.errors import PreconditionError


@dataclass(frozen=True)
class ConflictHypergraph:
    """Facts as vertices, jointly violating fact sets as edges.

    Edges are kept in canonical order (size, then lexicographic) and are not
    minimized; `minimized()` is a separate normalization.
    """
    vertices: FactSet
    edges: tuple[FactSet, ...]
    _incidence: dict[Fact, tuple[FactSet, ...]] = field(
        init=False, repr=False, compare=False, hash=False
    )

    def __post_init__(self):
        edges = tuple(sort_fact_sets(set(self.edges)))
        for edge in edges:
            if not edge or not edge <= self.vertices:
                raise PreconditionError(
                    f"edge {sorted(edge)} is not a non-empty vertex subset"
                )
        object.__setattr__(self, "edges", edges)
        incidence: dict[Fact, list[FactSet]] = {v: [] for v in self.vertices}
        for edge in edges:
            for fact in edge:
                incidence[fact].append(edge)
        object.__setattr__(
            self, "_incidence", {v: tuple(es) for v, es in incidence.items()}
        )

    def incidence(self, fact: Fact) -> tuple[FactSet, ...]:
        """edges(t): the edges containing `fact`, in canonical order."""
        return self._incidence.get(fact, ())

    def conflicting_facts(self) -> FactSet:
        return frozenset(v for v, es in self._incidence.items() if es)

    def self_conflicting_facts(self) -> FactSet:
        return frozenset(next(iter(e)) for e in self.edges if len(e) == 1)

    def restrict(self, keep: Iterable[Fact]) -> "ConflictHypergraph":
        keep = frozenset(keep)
        if not keep <= self.vertices:
            raise PreconditionError(
                "restrict: kept facts must be vertices of the hypergraph"
            )
        return ConflictHypergraph(keep, tuple(e for e in self.edges if e <= keep))

    def minimized(self) -> "ConflictHypergraph":
        """Drops every edge that strictly contains another edge."""
        kept = [e for e in self.edges if not any(other < e for other in self.edges)]
        return ConflictHypergraph(self.vertices, tuple(kept))

    def is_consistent(self, facts: Iterable[Fact]) -> bool:
        facts = frozenset(facts)
        return not any(e <= facts for e in self.edges)


def build_hypergraph(
    db: Database, constraints: Iterable[DenialConstraint]
) -> ConflictHypergraph:
    edges: set[FactSet] = set()
    for constraint in constraints:
        edges.update(find_violations(constraint, db))
    graph = ConflictHypergraph(db.facts, tuple(edges))
    logging.info(
        "build_hypergraph: %d vertices, %d edges", len(graph.vertices), len(graph.edges)
    )
    return graph


def conflicting_facts(g: ConflictHypergraph) -> FactSet:
    return g.conflicting_facts()


def restrict(g: ConflictHypergraph, keep: Iterable[Fact]) -> ConflictHypergraph:
    return g.restrict(keep)
