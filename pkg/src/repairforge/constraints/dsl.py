"""Parser for the denial-constraint DSL.

    :- employee(N,S1,D1), employee(N,S2,D2), S1 != S2.
    FD employee: 1 -> 2 3.
    KEY r: 1.

`FD` and `KEY` shorthands expand at parse time into one denial constraint per
determined position, which is the per-attribute form of the dependency.
"""

import logging
from collections.abc import Mapping
from typing import TextIO

from lark import v_args

from src.repairforge.constraints.model import (
    Comparison,
    ConstraintAtom,
    Constant,
    DenialConstraint,
    Variable,
)
from src.repairforge.core.grammar import (
    CONSTRAINTS_GRAMMAR,
    ValueTransformer,
    parse_text,
    read_source,
)
from src.repairforge.core.values import ComparisonOp
from src.repairforge.errors import ArityMismatchError, ConstraintSyntaxError


class _ConstraintTransformer(ValueTransformer):
    def variable(self, children):
        return Variable(str(children[0]))

    @staticmethod
    def _term(item):
        return item if isinstance(item, Variable) else Constant(item)

    def atom(self, children):
        name = children[0]
        atom = ConstraintAtom(str(name), tuple(self._term(c) for c in children[1:]))
        return (atom, name.line, name.column)

    def comparison(self, children):
        left, op, right = children
        return Comparison(self._term(left), ComparisonOp(str(op)), self._term(right))

    @v_args(meta=True)
    def denial(self, meta, children):
        atoms = [c for c in children if isinstance(c, tuple)]
        comparisons = [c for c in children if isinstance(c, Comparison)]
        return ("denial", atoms, comparisons, meta.line, meta.column)

    def positions(self, children):
        return [(int(tok), tok.line, tok.column) for tok in children]

    def fd(self, children):
        name, lhs, rhs = children
        return ("fd", str(name), lhs, rhs, name.line, name.column)

    def key(self, children):
        name, positions = children
        return ("key", str(name), positions, name.line, name.column)

    def start(self, children):
        return children


class _ConstraintBuilder:
    """Accumulates constraints in file order while tracking relation arities."""

    def __init__(self, schema: Mapping[str, int] | None):
        self.schema: dict[str, int] = dict(schema or {})
        self.constraints: list[DenialConstraint] = []

    def _next_id(self) -> str:
        return f"dc{len(self.constraints) + 1}"

    def declare(self, relation: str, arity: int, line: int, column: int):
        expected = self.schema.setdefault(relation, arity)
        if expected != arity:
            raise ArityMismatchError(relation, expected, arity, line, column)

    def add_denial(self, atoms, comparisons, line: int):
        for atom, atom_line, atom_column in atoms:
            self.declare(atom.relation, atom.arity, atom_line, atom_column)
        self.constraints.append(
            DenialConstraint(
                self._next_id(), tuple(a for a, _, _ in atoms), tuple(comparisons), line
            )
        )

    def add_dependency(self, relation: str, lhs, rhs, line: int, column: int):
        arity = self.schema.get(relation)
        if arity is None:
            raise ConstraintSyntaxError(
                f"arity of {relation} is unknown; "
                f"declare it with '#relation {relation}/k.'",
                line,
                column,
            )
        for position, pos_line, pos_column in [*lhs, *rhs]:
            if not 1 <= position <= arity:
                raise ConstraintSyntaxError(
                    f"position {position} out of range for {relation}/{arity}",
                    pos_line,
                    pos_column,
                )
        determining = {p for p, _, _ in lhs}
        determined = sorted({p for p, _, _ in rhs})
        overlap = determining.intersection(determined)
        if overlap:
            raise ConstraintSyntaxError(
                f"positions {sorted(overlap)} appear on both sides of the dependency",
                line,
                column,
            )
        if not determined:
            logging.warning(
                "ConstraintBuilder: dependency on %s at line %d "
                "determines nothing; skipped",
                relation,
                line,
            )
        for position in determined:
            denial = dependency_denial(
                self._next_id(), relation, arity, determining, position, line
            )
            self.constraints.append(denial)


def dependency_denial(
    constraint_id: str,
    relation: str,
    arity: int,
    determining: set[int] | frozenset[int],
    determined: int,
    line: int | None = None,
) -> DenialConstraint:
    """The denial form of `relation: determining -> determined` (1-based positions)."""
    first, second = [], []
    for position in range(1, arity + 1):
        if position in determining:
            shared = Variable(f"V{position}")
            first.append(shared)
            second.append(shared)
        else:
            first.append(Variable(f"V{position}_1"))
            second.append(Variable(f"V{position}_2"))
    return DenialConstraint(
        constraint_id,
        (
            ConstraintAtom(relation, tuple(first)),
            ConstraintAtom(relation, tuple(second)),
        ),
        (Comparison(first[determined - 1], ComparisonOp.NE, second[determined - 1]),),
        line,
    )


def parse_constraints(
    source: str | TextIO, schema: Mapping[str, int] | None = None
) -> list[DenialConstraint]:
    """Parses the denial DSL into constraints in file order.

    `schema` supplies relation arities (normally the facts file's schema); the
    `#relation` header in the constraints file does the same.
    """
    items = parse_text(
        read_source(source),
        CONSTRAINTS_GRAMMAR,
        _ConstraintTransformer(ConstraintSyntaxError),
        ConstraintSyntaxError,
    )
    builder = _ConstraintBuilder(schema)
    for item in items:
        tag = item[0]
        if tag == "header":
            _, relation, arity, line, column = item
            builder.declare(relation, arity, line, column)
        elif tag == "denial":
            _, atoms, comparisons, line, _ = item
            builder.add_denial(atoms, comparisons, line)
        elif tag == "fd":
            _, relation, lhs, rhs, line, column = item
            builder.add_dependency(relation, lhs, rhs, line, column)
        else:
            _, relation, positions, line, column = item
            arity = builder.schema.get(relation, 0)
            key = {p for p, _, _ in positions}
            rest = [(p, line, column) for p in range(1, arity + 1) if p not in key]
            builder.add_dependency(relation, positions, rest, line, column)
    logging.info("parse_constraints: %d denial constraints", len(builder.constraints))
    return builder.constraints


def render_constraints(constraints: list[DenialConstraint]) -> str:
    return "".join(f"{c}\n" for c in constraints)
