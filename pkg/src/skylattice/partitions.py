"""Partitions of row ids and their lattice operations under refinement."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import chain
from typing import Iterable

from .errors import ContractViolation


@dataclass(frozen=True)
class Partition:
    """Disjoint non-empty blocks of row ids in canonical form.

    Canonical form: ids ascending inside each block, blocks ordered by their
    smallest member. Equality and hashing are structural on that form.
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        previous_first = None
        for block in self.blocks:
            if not block:
                raise ContractViolation("partition blocks must be non-empty")
            if any(b <= a for a, b in zip(block, block[1:])):
                raise ContractViolation(f"block {block} is not strictly ascending")
            if previous_first is not None and block[0] <= previous_first:
                raise ContractViolation("blocks must be ordered by smallest member")
            previous_first = block[0]
            for member in block:
                if member in seen:
                    raise ContractViolation(f"id {member} appears in two blocks")
                seen.add(member)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> Partition:
        """Canonicalize arbitrary block iterables; empty input blocks are dropped."""
        normal = sorted(tuple(sorted(block)) for block in map(set, blocks) if block)
        return cls(tuple(normal))

    @classmethod
    def singletons(cls, universe: Iterable[int]) -> Partition:
        return cls(tuple((x,) for x in sorted(universe)))

    @classmethod
    def single_block(cls, universe: Iterable[int]) -> Partition:
        members = tuple(sorted(universe))
        return cls((members,) if members else ())

    @cached_property
    def universe(self) -> frozenset[int]:
        return frozenset(chain.from_iterable(self.blocks))

    def text(self) -> str:
        """Readable form like ``1|2|35|4``; commas appear once ids exceed one digit."""
        if all(0 <= x <= 9 for x in self.universe):
            return "|".join("".join(str(x) for x in block) for block in self.blocks)
        return "|".join(",".join(str(x) for x in block) for block in self.blocks)

    @classmethod
    def parse(cls, text: str) -> Partition:
        """Inverse of :func:`text`; the empty string is the empty partition."""
        if not text:
            return cls(())
        blocks = []
        for token in text.split("|"):
            if "," in token:
                blocks.append([int(x) for x in token.split(",")])
            else:
                blocks.append([int(ch) for ch in token])
        return cls.of(blocks)


def _check_same_universe(p: Partition, q: Partition) -> None:
    if p.universe != q.universe:
        raise ContractViolation("partitions cover different universes")


def finer_than(p: Partition, q: Partition) -> bool:
    """True when every block of p lies inside a single block of q."""
    _check_same_universe(p, q)
    owner = {x: i for i, block in enumerate(q.blocks) for x in block}
    for block in p.blocks:
        home = owner[block[0]]
        if any(owner[x] != home for x in block[1:]):
            return False
    return True


def partition_product(p: Partition, q: Partition) -> Partition:
    """Greatest lower bound under refinement: non-empty pairwise block intersections."""
    _check_same_universe(p, q)
    owner_p = {x: i for i, block in enumerate(p.blocks) for x in block}
    owner_q = {x: i for i, block in enumerate(q.blocks) for x in block}
    cells: dict[tuple[int, int], list[int]] = {}
    for x in p.universe:
        cells.setdefault((owner_p[x], owner_q[x]), []).append(x)
    return Partition.of(cells.values())


def union_containing(element: int, family: Iterable[Iterable[int]]) -> frozenset[int]:
    """Union of every member of the family that contains the element."""
    out: set[int] = set()
    for member in family:
        member = frozenset(member)
        if element in member:
            out |= member
    return frozenset(out)


def _maximal_sets(family: set[frozenset[int]]) -> set[frozenset[int]]:
    return {s for s in family if not any(s < t for t in family)}


def partition_sum(p: Partition, q: Partition) -> Partition:
    """Least upper bound under refinement.

    Starts from the maximal blocks of both partitions and repeatedly replaces
    each element's covering blocks by their union, keeping maximal sets, until
    the family is stable. The fixpoint is the blockwise-connected merge of p
    and q.
    """
    _check_same_universe(p, q)
    elements = sorted(p.universe)
    current = _maximal_sets({frozenset(b) for b in p.blocks} | {frozenset(b) for b in q.blocks})
    while True:
        merged = _maximal_sets({union_containing(e, current) for e in elements})
        if merged == current:
            break
        current = merged
    return Partition.of(current)


def representatives(p: Partition) -> tuple[int, ...]:
    """Smallest id of each block, ascending."""
    return tuple(block[0] for block in p.blocks)
