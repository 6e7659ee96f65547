"""Recognizes functional dependencies and keys among denial constraints.

A constraint is a dependency when it matches, up to variable renaming and
attribute permutation, the template

    :- p(X1, X2, X4), p(X1, X3, X5), X2 != X3.

with a single determined attribute: two atoms over one relation, no
constants, no variable repeated inside an atom, the positions sharing a
variable forming the determining set, and one `!=` between the two atoms'
variables at a non-shared position.
"""

import logging
from collections.abc import Iterable, Mapping

from src.repairforge.constraints.model import (
    ConstraintClass,
    ConstraintKind,
    DenialConstraint,
    Variable,
)
from src.repairforge.core.values import ComparisonOp


def classify(
    c: DenialConstraint, schema: Mapping[str, int] | None = None
) -> ConstraintClass:
    if len(c.atoms) != 2 or len(c.comparisons) != 1:
        return ConstraintClass.general()
    first, second = c.atoms
    if first.relation != second.relation or first.arity != second.arity:
        return ConstraintClass.general()
    arity = first.arity
    if schema is not None and schema.get(first.relation, arity) != arity:
        return ConstraintClass.general()

    terms = first.terms + second.terms
    if not all(isinstance(t, Variable) for t in terms):
        return ConstraintClass.general()
    first_names = [t.name for t in first.terms]  # type: ignore[union-attr]
    second_names = [t.name for t in second.terms]  # type: ignore[union-attr]
    if len(set(first_names)) != arity or len(set(second_names)) != arity:
        return ConstraintClass.general()

    shared = set(first_names) & set(second_names)
    determining = set()
    for position, (a, b) in enumerate(zip(first_names, second_names), start=1):
        if a == b:
            determining.add(position)
        elif a in shared or b in shared:
            # A variable shared across atoms at different positions.
            return ConstraintClass.general()

    comparison = c.comparisons[0]
    if comparison.op is not ComparisonOp.NE:
        return ConstraintClass.general()
    left, right = comparison.left, comparison.right
    if not (isinstance(left, Variable) and isinstance(right, Variable)):
        return ConstraintClass.general()
    names = {left.name, right.name}
    determined = None
    for position, (a, b) in enumerate(zip(first_names, second_names), start=1):
        if position not in determining and {a, b} == names:
            determined = position
    if determined is None:
        return ConstraintClass.general()

    kind = (
        ConstraintKind.KEY
        if len(determining) + 1 == arity
        else ConstraintKind.FUNCTIONAL_DEPENDENCY
    )
    return ConstraintClass(
        kind, first.relation, frozenset(determining), frozenset({determined})
    )


def certify_single_dependency(
    constraints: Iterable[DenialConstraint], schema: Mapping[str, int] | None = None
) -> ConstraintClass | None:
    """Merges per-attribute dependencies into one FD or key, if possible.

    Succeeds when every constraint is a dependency on the same relation with
    the same determining positions; the merged dependency is a key when its
    two sides cover all attributes.
    """
    constraints = list(constraints)
    classes = [classify(c, schema) for c in constraints]
    if not classes or not all(cls.is_dependency for cls in classes):
        return None
    relation, lhs = classes[0].relation, classes[0].lhs
    if any(cls.relation != relation or cls.lhs != lhs for cls in classes):
        return None
    rhs = frozenset().union(*(cls.rhs for cls in classes))
    arity = _arity_of(constraints, relation)
    kind = ConstraintKind.FUNCTIONAL_DEPENDENCY
    if len(lhs) + len(rhs) == arity:
        kind = ConstraintKind.KEY
    merged = ConstraintClass(kind, relation, lhs, rhs)
    logging.info("certify_single_dependency: certified %s", merged)
    return merged


def _arity_of(constraints: Iterable[DenialConstraint], relation: str | None) -> int:
    for c in constraints:
        for atom in c.atoms:
            if atom.relation == relation:
                return atom.arity
    return 0
