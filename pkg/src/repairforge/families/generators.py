"""Instance families with known canonical databases.

- `dn`: the two-keys family. For i = 1..n the facts
  t_i1 = r(a, b_i), t_i2 = r(a_i, b_i), t_i3 = r(a_i, b_ip), with a key on
  each of the two attributes.
- `onefd`: r(a, b_i, c_1) and r(a, b_i, c_2) for i = 1..n under A -> B. One
  clique of n two-fact clusters.
- `cliques`: r(k_i, v_j) under a key on the first attribute, one clique per
  requested size.
"""

import itertools
from enum import Enum

from pydantic import BaseModel, Field, PositiveInt, model_validator

from src.repairforge.constraints.dsl import dependency_denial
from src.repairforge.constraints.model import DenialConstraint
from src.repairforge.core.model import Database, Fact, FactSet
from src.repairforge.core.values import Symbol
from src.repairforge.disjunctive.database import DisjunctiveDatabase, reduce_fact_sets
from src.repairforge.errors import PreconditionError
from src.repairforge.repairs.enumeration import RepairKind


class FamilyKind(str, Enum):
    DN_TWO_KEYS = "dn"
    ONE_FD_EXPONENTIAL = "onefd"
    ONE_KEY_CLIQUES = "cliques"


class FamilySpec(BaseModel):
    family: FamilyKind
    n: PositiveInt = Field(default=1)
    clique_sizes: list[PositiveInt] = Field(default_factory=list)

    @model_validator(mode="after")
    def _sizes_for_cliques(self) -> "FamilySpec":
        if self.family is FamilyKind.ONE_KEY_CLIQUES and not self.clique_sizes:
            raise ValueError("the cliques family needs at least one clique size")
        return self


def _s(name: str) -> Symbol:
    return Symbol(name)


def dn_fact(i: int, j: int) -> Fact:
    """t_ij of the two-keys family, j in {1, 2, 3}."""
    if j == 1:
        return Fact("r", (_s("a"), _s(f"b_{i}")))
    if j == 2:
        return Fact("r", (_s(f"a_{i}"), _s(f"b_{i}")))
    if j == 3:
        return Fact("r", (_s(f"a_{i}"), _s(f"b_{i}p")))
    raise PreconditionError(f"dn facts are indexed 1..3, got {j}")


def onefd_fact(i: int, prime: int) -> Fact:
    """t_i' (prime=1) or t_i'' (prime=2) of the one-FD family."""
    return Fact("r", (_s("a"), _s(f"b_{i}"), _s(f"c_{prime}")))


def generate(spec: FamilySpec) -> tuple[Database, list[DenialConstraint]]:
    if spec.family is FamilyKind.DN_TWO_KEYS:
        facts = [dn_fact(i, j) for i in range(1, spec.n + 1) for j in (1, 2, 3)]
        constraints = [
            dependency_denial("dc1", "r", 2, {1}, 2),
            dependency_denial("dc2", "r", 2, {2}, 1),
        ]
        return Database.of(facts, {"r": 2}), constraints
    if spec.family is FamilyKind.ONE_FD_EXPONENTIAL:
        facts = [onefd_fact(i, p) for i in range(1, spec.n + 1) for p in (1, 2)]
        return Database.of(facts, {"r": 3}), [dependency_denial("dc1", "r", 3, {1}, 2)]
    facts = [
        Fact("r", (_s(f"k_{i}"), _s(f"v_{j}")))
        for i, size in enumerate(spec.clique_sizes, start=1)
        for j in range(1, size + 1)
    ]
    return Database.of(facts, {"r": 2}), [dependency_denial("dc1", "r", 2, {1}, 2)]


def expected_sizes(spec: FamilySpec, semantics: RepairKind) -> int:
    """Closed-form ||D_min|| of the family under the given repair semantics."""
    n = spec.n
    if spec.family is FamilyKind.DN_TWO_KEYS:
        if semantics is RepairKind.S_REPAIR:
            return 2 * n + (n + 1) * n * 2 ** (n - 1)
        # At n = 1 the singleton t_13 subsumes t_12 v t_13.
        return 2 if n == 1 else 2 * n + n * 2**n
    if spec.family is FamilyKind.ONE_FD_EXPONENTIAL:
        return n * 2**n
    return sum(spec.clique_sizes)


def closed_form_dn(n: int, semantics: RepairKind) -> DisjunctiveDatabase:
    """The canonical database of the two-keys family, built from its formula."""
    if n < 1:
        raise PreconditionError(f"n must be positive, got {n}")
    indices = range(1, n + 1)
    sets: list[FactSet] = [frozenset({dn_fact(i, 2), dn_fact(i, 3)}) for i in indices]
    if semantics is RepairKind.S_REPAIR:
        for i in indices:
            others = [(dn_fact(z, 1), dn_fact(z, 3)) for z in indices if z != i]
            for picked in itertools.product(*others):
                sets.append(frozenset({dn_fact(i, 1), dn_fact(i, 2), *picked}))
    else:
        choices = [(dn_fact(z, 1), dn_fact(z, 3)) for z in indices]
        sets.extend(frozenset(picked) for picked in itertools.product(*choices))
    return DisjunctiveDatabase.of(reduce_fact_sets(sets))


def dn_c_repairs(n: int) -> set[FactSet]:
    """Maximum-cardinality repairs of the two-keys family.

    One i keeps t_i1 and t_i3, and every other z keeps exactly one of t_z2
    and t_z3.
    """
    worlds: set[FactSet] = set()
    for i in range(1, n + 1):
        others = [(dn_fact(z, 2), dn_fact(z, 3)) for z in range(1, n + 1) if z != i]
        for picked in itertools.product(*others):
            worlds.add(frozenset({dn_fact(i, 1), dn_fact(i, 3), *picked}))
    return worlds
