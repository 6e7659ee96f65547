from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import total_ordering
from types import MappingProxyType

from src.repairforge.core.values import Value, render_value, value_sort_key
from src.repairforge.errors import ArityMismatchError


@total_ordering
@dataclass(frozen=True, slots=True)
class Fact:
    """A ground relational atom `relation(args...)`."""
    relation: str
    args: tuple[Value, ...]
    sort_key: tuple = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(
            self,
            "sort_key",
            (self.relation, tuple(value_sort_key(a) for a in self.args)),
        )

    @property
    def arity(self) -> int:
        return len(self.args)

    def __lt__(self, other: "Fact") -> bool:
        if not isinstance(other, Fact):
            return NotImplemented
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.relation}({','.join(render_value(a) for a in self.args)})"


FactSet = frozenset[Fact]


def fact_set_key(facts: Iterable[Fact]) -> tuple:
    """Canonical key for a set of facts: size first, then lexicographic."""
    ordered = sorted(facts)
    return (len(ordered), tuple(f.sort_key for f in ordered))


def sort_fact_sets(
    sets: Iterable[FactSet], largest_first: bool = False
) -> list[FactSet]:
    if largest_first:
        return sorted(sets, key=lambda s: (-len(s), fact_set_key(s)[1]))
    return sorted(sets, key=fact_set_key)


def render_fact_set(facts: Iterable[Fact], separator: str = ", ") -> str:
    return separator.join(str(f) for f in sorted(facts))


@dataclass(frozen=True)
class Database:
    """A finite set of facts together with the arity of every relation."""
    facts: FactSet = frozenset()
    schema: Mapping[str, int] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(self, "schema", MappingProxyType(dict(self.schema)))

    @classmethod
    def of(
        cls, facts: Iterable[Fact], schema: Mapping[str, int] | None = None
    ) -> "Database":
        """Builds a database, inferring arities from first occurrence."""
        arities = dict(schema or {})
        collected = []
        for fact in facts:
            expected = arities.setdefault(fact.relation, fact.arity)
            if expected != fact.arity:
                raise ArityMismatchError(fact.relation, expected, fact.arity)
            collected.append(fact)
        return cls(frozenset(collected), arities)

    def __len__(self) -> int:
        return len(self.facts)

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self.facts))

    def __contains__(self, fact: object) -> bool:
        return fact in self.facts

    @property
    def relations(self) -> list[str]:
        return sorted(self.schema)

    def by_relation(self) -> dict[str, list[Fact]]:
        """Sorted fact lists per relation; relations without facts map to []."""
        grouped: dict[str, list[Fact]] = {name: [] for name in self.schema}
        for fact in sorted(self.facts):
            grouped.setdefault(fact.relation, []).append(fact)
        return grouped

    def subset(self, facts: Iterable[Fact]) -> "Database":
        return Database(frozenset(facts) & self.facts, self.schema)
