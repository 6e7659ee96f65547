"""Minimal hypergraph transversals (minimal hitting sets).

The enumeration is a depth-first branch-and-bound over bitmasks: branch on
the elements of the uncovered edge with the fewest admissible elements,
forbid earlier siblings in later branches, and cut any branch in which a
chosen element has lost its last private edge. Every leaf is then a minimal
transversal, and each one is reached exactly once.
"""

import logging
from collections.abc import Hashable, Iterable
from typing import TypeVar

from src.repairforge.errors import EmptyEdgeError, LimitExceededError

T = TypeVar("T", bound=Hashable)


def canonical_order(sets: Iterable[frozenset[T]]) -> list[frozenset[T]]:
    """Sorts by size, then lexicographically on the sorted members."""
    return sorted(sets, key=lambda s: (len(s), sorted(s)))  # type: ignore[type-var]


def iter_bits(mask: int) -> Iterable[int]:
    """Positions of the set bits, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def minimal_masks(masks: Iterable[int]) -> list[int]:
    """The inclusion-minimal masks, smallest first."""
    ordered = sorted(set(masks), key=int.bit_count)
    kept: list[int] = []
    for mask in ordered:
        if not any(k & mask == k for k in kept):
            kept.append(mask)
    return kept


class BitEncoding:
    """Maps a family of sets onto bit positions, in sorted element order."""

    def __init__(self, sets: list[frozenset]):
        self.universe = sorted(set().union(*sets))
        self.index = {x: i for i, x in enumerate(self.universe)}

    def encode(self, s: Iterable) -> int:
        mask = 0
        for x in s:
            mask |= 1 << self.index[x]
        return mask

    def decode(self, mask: int) -> frozenset:
        return frozenset(self.universe[i] for i in iter_bits(mask))


def _check_edges(sets: list[frozenset]) -> None:
    if any(not s for s in sets):
        raise EmptyEdgeError("an empty set has no transversal")


def minimal_transversals(
    h: Iterable[Iterable[T]],
    max_results: int | None = None,
    limit_name: str = "max_worlds",
) -> list[frozenset[T]]:
    """All inclusion-minimal sets intersecting every member of `h`.

    Tr(∅) = {∅}; a family containing the empty set is rejected.
    """
    sets = [frozenset(s) for s in h]
    if not sets:
        return [frozenset()]
    _check_edges(sets)
    encoding = BitEncoding(sets)
    edges = minimal_masks(encoding.encode(s) for s in sets)
    found = _enumerate_minimal(edges, max_results, limit_name)
    result = canonical_order(encoding.decode(m) for m in found)
    logging.debug(
        "minimal_transversals: %d sets over %d elements -> %d transversals",
        len(edges),
        len(encoding.universe),
        len(result),
    )
    return result


def _enumerate_minimal(
    edges: list[int], max_results: int | None, limit_name: str
) -> list[int]:
    results: list[int] = []

    def has_private_edges(chosen: int) -> bool:
        for x in iter_bits(chosen):
            bit = 1 << x
            if not any(e & chosen == bit for e in edges):
                return False
        return True

    def search(chosen: int, forbidden: int, uncovered: list[int]):
        if not uncovered:
            results.append(chosen)
            if max_results is not None and len(results) > max_results:
                raise LimitExceededError(limit_name, max_results, len(results))
            return
        edge = min(uncovered, key=lambda e: (e & ~forbidden).bit_count())
        options = edge & ~forbidden
        for x in iter_bits(options):
            bit = 1 << x
            extended = chosen | bit
            if has_private_edges(extended):
                search(extended, forbidden, [e for e in uncovered if not e & bit])
            forbidden |= bit

    search(0, 0, edges)
    return results


def minimum_transversal_size(h: Iterable[Iterable[T]]) -> int:
    """Size of a smallest transversal, by branch-and-bound.

    The bound counts a greedy packing of pairwise disjoint uncovered edges;
    each of them needs its own element, so the bound never overestimates.
    """
    sets = [frozenset(s) for s in h]
    if not sets:
        return 0
    _check_edges(sets)
    encoding = BitEncoding(sets)
    edges = minimal_masks(encoding.encode(s) for s in sets)
    best = len(encoding.universe)

    def packing_bound(uncovered: list[int]) -> int:
        used = 0
        count = 0
        for e in sorted(uncovered, key=int.bit_count):
            if not e & used:
                used |= e
                count += 1
        return count

    def search(size: int, uncovered: list[int]):
        nonlocal best
        if not uncovered:
            best = min(best, size)
            return
        if size + packing_bound(uncovered) >= best:
            return
        edge = min(uncovered, key=int.bit_count)
        for x in iter_bits(edge):
            bit = 1 << x
            search(size + 1, [e for e in uncovered if not e & bit])

    search(0, edges)
    return best
