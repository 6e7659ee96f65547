from collections.abc import Iterable

from src.repairforge.config import config
from src.repairforge.core.model import Fact, FactSet, render_fact_set, sort_fact_sets
from src.repairforge.disjunctive.database import DisjunctiveDatabase
from src.repairforge.disjunctive.transversals import minimal_transversals
from src.repairforge.errors import NotAntichainError, PreconditionError


def canonical_from_worlds(
    worlds: Iterable[Iterable[Fact]], max_disjunctions: int | None = None
) -> DisjunctiveDatabase:
    """The reduced disjunctive database whose minimal models are `worlds`.

    That is the family of minimal transversals of the worlds; {∅} maps to the
    empty database.
    """
    family = sort_fact_sets({frozenset(w) for w in worlds})
    if not family:
        raise PreconditionError("canonical_from_worlds needs at least one world")
    for i, smaller in enumerate(family):
        for larger in family[i + 1 :]:
            if smaller < larger:
                raise NotAntichainError(
                    f"world {{{render_fact_set(smaller)}}} is contained in "
                    f"{{{render_fact_set(larger)}}}"
                )
    if family == [frozenset()]:
        return DisjunctiveDatabase()
    limit = max_disjunctions or config.max_disjunctions
    sets: list[FactSet] = minimal_transversals(family, max_results=limit)
    return DisjunctiveDatabase.of(sets)
