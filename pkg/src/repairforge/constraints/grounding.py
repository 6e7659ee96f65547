import logging

from src.repairforge.constraints.model import (
    Comparison,
    ConstraintAtom,
    Constant,
    DenialConstraint,
    Term,
    Variable,
)
from src.repairforge.core.model import Database, Fact, FactSet, sort_fact_sets
from src.repairforge.core.values import ComparisonOp, Value, compare_values

Binding = dict[str, Value]


def find_violations(c: DenialConstraint, db: Database) -> list[FactSet]:
    """All fact sets that jointly instantiate the body of `c` in `db`.

    Atoms are matched by sorted nested iteration over the per-relation fact
    lists; each comparison is checked as soon as its variables are bound.
    Returns the distinct sets in canonical order.
    """
    facts_by_relation = db.by_relation()
    candidates = [facts_by_relation.get(atom.relation, []) for atom in c.atoms]
    if any(not facts for facts in candidates):
        return []

    # Comparisons become checkable right after the atom binding their last variable.
    checks: list[list[Comparison]] = [[] for _ in c.atoms]
    bound: set[str] = set()
    pending = list(c.comparisons)
    for index, atom in enumerate(c.atoms):
        bound |= atom.variables()
        ready = [cmp for cmp in pending if cmp.variables() <= bound]
        checks[index].extend(ready)
        pending = [cmp for cmp in pending if cmp not in ready]

    found: set[FactSet] = set()
    chosen: list[Fact] = []

    def extend(index: int, binding: Binding):
        if index == len(c.atoms):
            found.add(frozenset(chosen))
            return
        atom = c.atoms[index]
        for fact in candidates[index]:
            extended = _match(atom, fact, binding)
            if extended is None:
                continue
            if not all(_holds(cmp, extended) for cmp in checks[index]):
                continue
            chosen.append(fact)
            extend(index + 1, extended)
            chosen.pop()

    extend(0, {})
    violations = sort_fact_sets(found)
    logging.debug("find_violations: %s has %d violations", c.id, len(violations))
    return violations


def _match(atom: ConstraintAtom, fact: Fact, binding: Binding) -> Binding | None:
    if fact.arity != atom.arity:
        return None
    extended = binding
    for term, value in zip(atom.terms, fact.args):
        if isinstance(term, Constant):
            if not compare_values(term.value, value, ComparisonOp.EQ):
                return None
            continue
        current = extended.get(term.name)
        if current is None:
            if extended is binding:
                extended = dict(binding)
            extended[term.name] = value
        elif not compare_values(current, value, ComparisonOp.EQ):
            return None
    return extended


def _resolve(term: Term, binding: Binding) -> Value:
    return binding[term.name] if isinstance(term, Variable) else term.value


def _holds(comparison: Comparison, binding: Binding) -> bool:
    return compare_values(
        _resolve(comparison.left, binding),
        _resolve(comparison.right, binding),
        comparison.op,
    )


def satisfies(db: Database, constraints: list[DenialConstraint]) -> bool:
    return all(not find_violations(c, db) for c in constraints)
