import itertools
import logging
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import TextIO

from src.repairforge.config import config
from src.repairforge.core.grammar import (
    DISJUNCTIVE_GRAMMAR,
    ValueTransformer,
    parse_text,
    read_source,
)
from src.repairforge.core.model import Fact, FactSet, fact_set_key, sort_fact_sets
from src.repairforge.disjunctive.transversals import minimal_transversals
from src.repairforge.errors import FactsSyntaxError, LimitExceededError


@dataclass(frozen=True)
class Disjunction:
    """A non-empty disjunction of distinct facts; identity is its fact set."""
    facts: FactSet

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        if not self.facts:
            raise ValueError("A disjunction must contain at least one fact")

    def __len__(self) -> int:
        return len(self.facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def __str__(self) -> str:
        return " v ".join(str(f) for f in self)


@dataclass(frozen=True)
class DisjunctiveDatabase:
    disjunctions: frozenset[Disjunction] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "disjunctions", frozenset(self.disjunctions))

    @classmethod
    def of(cls, fact_sets: Iterable[Iterable[Fact]]) -> "DisjunctiveDatabase":
        return cls(frozenset(Disjunction(frozenset(s)) for s in fact_sets))

    def __len__(self) -> int:
        return len(self.disjunctions)

    def __iter__(self) -> Iterator[Disjunction]:
        """Disjunctions in canonical order: size, then lexicographic."""
        return iter(sorted(self.disjunctions, key=lambda d: fact_set_key(d.facts)))

    def fact_sets(self) -> list[FactSet]:
        return [d.facts for d in self]

    def facts(self) -> FactSet:
        return frozenset().union(*(d.facts for d in self.disjunctions))


def subsumes(d1: Disjunction, d2: Disjunction) -> bool:
    """True iff S_d1 is a proper subset of S_d2."""
    return d1.facts < d2.facts


def reduction(dd: DisjunctiveDatabase) -> DisjunctiveDatabase:
    return DisjunctiveDatabase.of(reduce_fact_sets(dd.fact_sets()))


def reduce_fact_sets(sets: Iterable[FactSet]) -> list[FactSet]:
    """The inclusion-minimal members of `sets`, in canonical order."""
    kept: list[FactSet] = []
    by_fact: dict[Fact, list[FactSet]] = {}
    for s in sort_fact_sets(set(sets)):
        # Any subset of s already kept is indexed under one of s's facts.
        if any(k <= s for f in s for k in by_fact.get(f, ())):
            continue
        kept.append(s)
        by_fact.setdefault(min(s), []).append(s)
    return kept


def is_model(m: Iterable[Fact], dd: DisjunctiveDatabase) -> bool:
    m = frozenset(m)
    return all(d.facts & m for d in dd.disjunctions)


def size(dd: DisjunctiveDatabase) -> int:
    """||DD||: the total number of fact occurrences."""
    return sum(len(d) for d in dd.disjunctions)


def minimal_models(
    dd: DisjunctiveDatabase,
    max_facts: int | None = None,
    max_models: int | None = None,
    naive: bool = False,
) -> list[FactSet]:
    """The minimal models of `dd`: the minimal transversals of its fact sets.

    `naive=True` switches to an exhaustive subset sweep, used as an oracle.
    """
    max_facts = max_facts or config.max_facts
    max_models = max_models or config.max_worlds
    universe = dd.facts()
    if len(universe) > max_facts:
        raise LimitExceededError("max_facts", max_facts, len(universe))
    if naive:
        return naive_minimal_models(dd)
    models = minimal_transversals(dd.fact_sets(), max_results=max_models)
    logging.info("minimal_models: %d models over %d facts", len(models), len(universe))
    return models


def naive_minimal_models(dd: DisjunctiveDatabase) -> list[FactSet]:
    """Checks every subset of the mentioned facts; exponential by design."""
    universe = sorted(dd.facts())
    models = [
        frozenset(subset)
        for k in range(len(universe) + 1)
        for subset in itertools.combinations(universe, k)
        if is_model(subset, dd)
    ]
    return sort_fact_sets(m for m in models if not any(other < m for other in models))


def render_disjunctive(dd: DisjunctiveDatabase) -> str:
    return "".join(f"{d}.\n" for d in dd)


class _DisjunctiveTransformer(ValueTransformer):
    def disjunction(self, children):
        return frozenset(fact for fact, _, _ in children)

    def start(self, children):
        return children


def parse_disjunctive(source: str | TextIO) -> DisjunctiveDatabase:
    """Reads the text format written by `render_disjunctive`."""
    sets = parse_text(
        read_source(source),
        DISJUNCTIVE_GRAMMAR,
        _DisjunctiveTransformer(FactsSyntaxError),
        FactsSyntaxError,
    )
    return DisjunctiveDatabase.of(sets)
