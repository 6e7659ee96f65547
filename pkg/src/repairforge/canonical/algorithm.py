import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from enum import Enum

from pydantic import BaseModel, Field, PositiveInt

from src.repairforge.config import config
from src.repairforge.conflicts.hypergraph import ConflictHypergraph, build_hypergraph
from src.repairforge.constraints.model import DenialConstraint
from src.repairforge.core.model import Database
from src.repairforge.disjunctive.database import DisjunctiveDatabase, reduce_fact_sets
from src.repairforge.disjunctive.transversals import BitEncoding, iter_bits
from src.repairforge.errors import LimitExceededError
from src.schemas.outputs import BuildStats


class BuildMode(str, Enum):
    FAITHFUL = "faithful"
    EAGER_SUBSUMPTION = "eager"


class BuildOptions(BaseModel):
    """Resource guards and fixpoint mode for the canonical construction."""
    mode: BuildMode = Field(default=BuildMode.EAGER_SUBSUMPTION)
    max_disjunctions: PositiveInt = Field(
        default_factory=lambda: config.max_disjunctions
    )
    # None means |D|.
    max_disjunction_width: PositiveInt | None = Field(default=None)


class _DisjunctionStore:
    """The working set of disjunctions as fact bitmasks, indexed by bit.

    In eager mode the store is kept an antichain: a newcomer equal to or
    subsumed by a stored set is discarded, and stored sets it subsumes are
    evicted.
    """

    def __init__(self, eager: bool, limit: int, stats: BuildStats):
        self.eager = eager
        self.limit = limit
        self.stats = stats
        self.sets: set[int] = set()
        self.by_bit: dict[int, set[int]] = {}

    def __len__(self) -> int:
        return len(self.sets)

    def containing(self, bit: int) -> set[int]:
        return self.by_bit.get(bit, set())

    def _insert(self, s: int):
        self.sets.add(s)
        for bit in iter_bits(s):
            self.by_bit.setdefault(bit, set()).add(s)
        if len(self.sets) > self.limit:
            raise LimitExceededError("max_disjunctions", self.limit, len(self.sets))
        self.stats.peak_size = max(self.stats.peak_size, len(self.sets))

    def _evict(self, s: int):
        self.sets.discard(s)
        for bit in iter_bits(s):
            self.by_bit[bit].discard(s)

    def add(self, s: int) -> bool:
        """Adds `s`; returns whether the store changed."""
        if s in self.sets:
            return False
        if not self.eager:
            self._insert(s)
            return True
        bits = list(iter_bits(s))
        indexed = [self.containing(b) for b in bits]
        pool: Iterable[int] = (
            self.sets
            if sum(len(found) for found in indexed) > len(self.sets)
            else itertools.chain.from_iterable(indexed)
        )
        if any(other & s == other for other in pool):
            self.stats.subsumed += 1
            return False
        # Sets containing s contain every bit of s, in particular the rarest.
        anchor = min(indexed, key=len)
        for other in list(anchor):
            if other & s == s:
                self._evict(other)
                self.stats.subsumed += 1
        self._insert(s)
        return True


class CanonicalBuilder:
    """Builds the canonical disjunctive database of (D, F).

    Steps: drop facts forming singleton edges; seed, for every remaining
    fact t, each choice t ∨ t_1 ∨ ... ∨ t_n of one other fact from every edge
    containing t; then close under the edge rule until nothing changes: for
    an edge {t_1..t_k} and stored t_i ∨ D_i with D_i non-empty and disjoint
    from the edge, add D_1 ∨ ... ∨ D_k. The result is the reduction.

    Disjunctions are handled as bitmasks over the sorted surviving facts.
    """

    def __init__(
        self,
        db: Database,
        constraints: Sequence[DenialConstraint],
        options: BuildOptions | None = None,
        graph: ConflictHypergraph | None = None,
    ):
        self.db = db
        self.constraints = list(constraints)
        self.options = options or BuildOptions()
        self._graph = graph
        self.stats = BuildStats(mode=self.options.mode.value)
        self._encoding = BitEncoding([])

    def build(self) -> DisjunctiveDatabase:
        graph = self._graph or build_hypergraph(self.db, self.constraints)
        removed = graph.self_conflicting_facts()
        if removed:
            logging.warning(
                "CanonicalBuilder: dropping %d self-conflicting facts", len(removed)
            )
        self.stats.removed_self_conflicting = len(removed)
        reduced = graph.restrict(graph.vertices - removed)
        width_limit = self.options.max_disjunction_width or max(len(self.db), 1)
        self._encoding = BitEncoding([reduced.vertices])

        store = _DisjunctionStore(
            self.options.mode is BuildMode.EAGER_SUBSUMPTION,
            self.options.max_disjunctions,
            self.stats,
        )
        delta = self._seed(reduced, store, width_limit)
        while delta:
            self.stats.iterations += 1
            staged = self._pass(reduced, store, delta, width_limit)
            merge_order = sorted(staged, key=lambda m: (m.bit_count(), m))
            delta = {s for s in merge_order if store.add(s)}
            # In eager mode a set added early in the merge may be evicted later.
            delta &= store.sets
            logging.info(
                "CanonicalBuilder: pass %d added %d disjunctions (store %d)",
                self.stats.iterations,
                len(delta),
                len(store),
            )

        final = reduce_fact_sets(self._encoding.decode(s) for s in store.sets)
        self.stats.final_disjunctions = len(final)
        self.stats.final_size = sum(len(s) for s in final)
        return DisjunctiveDatabase.of(final)

    def _check_width(self, s: int, width_limit: int):
        width = s.bit_count()
        if width > width_limit:
            raise LimitExceededError("max_disjunction_width", width_limit, width)

    def _seed(
        self, graph: ConflictHypergraph, store: _DisjunctionStore, width_limit: int
    ) -> set[int]:
        encode = self._encoding.encode
        for fact in sorted(graph.vertices):
            choices = [
                [encode([other]) for other in sorted(edge - {fact})]
                for edge in graph.incidence(fact)
            ]
            combinations = math.prod(len(options) for options in choices)
            if combinations > self.options.max_disjunctions:
                raise LimitExceededError(
                    "max_disjunctions", self.options.max_disjunctions, combinations
                )
            own = encode([fact])
            for picked in itertools.product(*choices):
                seeded = own
                for other in picked:
                    seeded |= other
                self._check_width(seeded, width_limit)
                self.stats.seeded += 1
                store.add(seeded)
        return set(store.sets)

    def _candidates(
        self, store: _DisjunctionStore, bit: int, edge: int, delta: set[int]
    ) -> tuple[list[int], list[int]]:
        """(old, new) rests D of every stored t ∨ D usable on `edge`.

        An eager store is an antichain, so the rests of one fact are already
        pairwise incomparable.
        """
        own = 1 << bit
        old: list[int] = []
        new: list[int] = []
        for stored in store.containing(bit):
            rest = stored & ~own
            if rest and not rest & edge:
                (new if stored in delta else old).append(rest)
        return sorted(old), sorted(new)

    def _edge_unions(self, lists: list[tuple[list[int], list[int]]]) -> set[int]:
        """Unions of one rest per edge member, at least one of them new.

        The member holding the first new rest fixes a position p: members
        before p take old rests only, members after p take any. Partial
        unions are deduplicated member by member, so choices that agree on
        their union so far are extended once.
        """
        unions: set[int] = set()
        for p, (_, fresh) in enumerate(lists):
            if not fresh:
                continue
            levels = (
                [old for old, _ in lists[:p]]
                + [fresh]
                + [old + new for old, new in lists[p + 1 :]]
            )
            self.stats.generated += math.prod(len(level) for level in levels)
            partial = {0}
            for level in levels:
                partial = {u | rest for u in partial for rest in level}
                if not partial:
                    break
            unions |= partial
        return unions

    def _pass(
        self,
        graph: ConflictHypergraph,
        store: _DisjunctionStore,
        delta: set[int],
        width_limit: int,
    ) -> set[int]:
        staged: set[int] = set()
        for edge in graph.edges:
            edge_mask = self._encoding.encode(edge)
            lists = [
                self._candidates(store, bit, edge_mask, delta)
                for bit in iter_bits(edge_mask)
            ]
            if any(not old and not new for old, new in lists):
                continue
            for union in self._edge_unions(lists):
                if union in store.sets or union in staged:
                    continue
                self._check_width(union, width_limit)
                staged.add(union)
            logging.debug(
                "CanonicalBuilder: edge of %d facts staged %d so far",
                len(edge),
                len(staged),
            )
        return staged


def algorithm1(
    db: Database,
    constraints: Sequence[DenialConstraint],
    options: BuildOptions | None = None,
) -> DisjunctiveDatabase:
    return CanonicalBuilder(db, constraints, options).build()
