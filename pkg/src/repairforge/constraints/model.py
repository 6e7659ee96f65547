from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from src.repairforge.core.values import ComparisonOp, Value, render_value
from src.repairforge.errors import EmptyConstraintError, UnsafeVariableError


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Constant:
    value: Value

    def __str__(self) -> str:
        return render_value(self.value)


Term = Union[Variable, Constant]


@dataclass(frozen=True, slots=True)
class ConstraintAtom:
    relation: str
    terms: tuple[Term, ...]

    @property
    def arity(self) -> int:
        return len(self.terms)

    def variables(self) -> set[str]:
        return {t.name for t in self.terms if isinstance(t, Variable)}

    def __str__(self) -> str:
        return f"{self.relation}({','.join(str(t) for t in self.terms)})"


@dataclass(frozen=True, slots=True)
class Comparison:
    left: Term
    op: ComparisonOp
    right: Term

    def variables(self) -> set[str]:
        return {t.name for t in (self.left, self.right) if isinstance(t, Variable)}

    def __str__(self) -> str:
        return f"{self.left} {self.op.value} {self.right}"


@dataclass(frozen=True)
class DenialConstraint:
    """`:- atom_1, ..., atom_n, comparison_1, ..., comparison_m.`

    Construction enforces a non-empty atom list and safety: every variable of
    a comparison occurs in some atom.
    """
    id: str
    atoms: tuple[ConstraintAtom, ...]
    comparisons: tuple[Comparison, ...] = ()
    line: int | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "comparisons", tuple(self.comparisons))
        if not self.atoms:
            raise EmptyConstraintError(
                f"constraint {self.id} has no relational atom", self.line, None
            )
        bound = self.variables_in_atoms()
        unsafe = sorted(set().union(*(c.variables() for c in self.comparisons)) - bound)
        if unsafe:
            raise UnsafeVariableError(unsafe[0], self.line, None)

    def variables_in_atoms(self) -> set[str]:
        return set().union(*(a.variables() for a in self.atoms))

    def __str__(self) -> str:
        body = [str(a) for a in self.atoms] + [str(c) for c in self.comparisons]
        return f":- {', '.join(body)}."


class ConstraintKind(str, Enum):
    GENERAL_DENIAL = "general_denial"
    FUNCTIONAL_DEPENDENCY = "functional_dependency"
    KEY = "key"


@dataclass(frozen=True)
class ConstraintClass:
    """Classification of a constraint; positions are 1-based."""
    kind: ConstraintKind
    relation: str | None = None
    lhs: frozenset[int] = frozenset()
    rhs: frozenset[int] = frozenset()

    @classmethod
    def general(cls) -> "ConstraintClass":
        return cls(ConstraintKind.GENERAL_DENIAL)

    @property
    def is_dependency(self) -> bool:
        return self.kind is not ConstraintKind.GENERAL_DENIAL

    def __str__(self) -> str:
        if self.kind is ConstraintKind.GENERAL_DENIAL:
            return "GeneralDenial"
        lhs = ",".join(str(p) for p in sorted(self.lhs))
        if self.kind is ConstraintKind.KEY:
            return f"Key({self.relation}: {lhs})"
        rhs = ",".join(str(p) for p in sorted(self.rhs))
        return f"FunctionalDependency({self.relation}: {lhs} -> {rhs})"
