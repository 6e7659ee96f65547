"""Closed-form canonical databases for a single key or a single FD.

For one dependency X -> Y on r, a clique is a maximal group of facts that
agree on X, and a cluster is a maximal group inside a clique that also agrees
on Y. Facts of different clusters of one clique conflict pairwise; nothing
else conflicts. Facts of other relations are untouched and each becomes a
singleton disjunction.
"""

import itertools
import logging
from collections.abc import Iterable

from src.repairforge.config import config
from src.repairforge.constraints.model import ConstraintClass, ConstraintKind
from src.repairforge.core.model import Database, Fact, FactSet
from src.repairforge.disjunctive.database import DisjunctiveDatabase
from src.repairforge.errors import ClassificationError, LimitExceededError


def _project(fact: Fact, positions: Iterable[int]) -> tuple:
    return tuple(fact.args[p - 1] for p in sorted(positions))


def _group(facts: Iterable[Fact], positions: frozenset[int]) -> list[list[Fact]]:
    groups: dict[tuple, list[Fact]] = {}
    for fact in sorted(facts):
        groups.setdefault(_project(fact, positions), []).append(fact)
    return sorted(groups.values(), key=lambda g: g[0])


def _check_dependency(
    r: Database, dependency: ConstraintClass, kinds: set[ConstraintKind]
):
    if dependency.kind not in kinds:
        raise ClassificationError(
            f"expected {' or '.join(sorted(k.value for k in kinds))}, got {dependency}"
        )
    arity = r.schema.get(dependency.relation or "")
    if arity is None:
        return
    if not all(1 <= p <= arity for p in dependency.lhs | dependency.rhs):
        raise ClassificationError(
            f"{dependency} does not fit {dependency.relation}/{arity}"
        )


def cliques(r: Database, dependency: ConstraintClass) -> list[list[Fact]]:
    """Facts of the dependency's relation grouped by their determining values."""
    facts = (f for f in r.facts if f.relation == dependency.relation)
    return _group(facts, dependency.lhs)


def clusters(clique: Iterable[Fact], dependency: ConstraintClass) -> list[list[Fact]]:
    return _group(clique, dependency.rhs)


def _untouched(r: Database, dependency: ConstraintClass) -> list[FactSet]:
    return [
        frozenset({f}) for f in sorted(r.facts) if f.relation != dependency.relation
    ]


def canonical_one_key(r: Database, key: ConstraintClass) -> DisjunctiveDatabase:
    """One disjunction per clique, holding the whole clique."""
    _check_dependency(r, key, {ConstraintKind.KEY})
    groups = cliques(r, key)
    logging.info("canonical_one_key: %d cliques for %s", len(groups), key)
    return DisjunctiveDatabase.of(
        [frozenset(group) for group in groups] + _untouched(r, key)
    )


def canonical_one_fd(
    r: Database,
    fd: ConstraintClass,
    max_disjunctions: int | None = None,
) -> DisjunctiveDatabase:
    """Per clique, every choice of one fact from each of its clusters.

    A key is accepted too: its clusters are single facts, which gives back the
    one-key shape.
    """
    _check_dependency(r, fd, {ConstraintKind.FUNCTIONAL_DEPENDENCY, ConstraintKind.KEY})
    limit = max_disjunctions or config.max_disjunctions
    sets = _untouched(r, fd)
    for clique in cliques(r, fd):
        parts = clusters(clique, fd)
        count = 1
        for part in parts:
            count *= len(part)
        if len(sets) + count > limit:
            raise LimitExceededError("max_disjunctions", limit, len(sets) + count)
        sets.extend(frozenset(choice) for choice in itertools.product(*parts))
    logging.info("canonical_one_fd: %d disjunctions for %s", len(sets), fd)
    return DisjunctiveDatabase.of(sets)
