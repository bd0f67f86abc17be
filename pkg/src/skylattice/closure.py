"""Agree sets, class partitions and the closure operators they induce.

Two rows agree on the criteria where their values coincide; grouping rows by
their projections partitions the relation into classes. Mapping a criterion
set to its class partition and a partition back to the largest criterion set
its blocks agree on yields a pair of closure operators, one on criterion sets
and one on partitions. Criterion sets fixed by their closure index everything
the lattice and the partial skycube store need.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ContractViolation
from .model import CriterionSet, Relation, Row, format_criteria
from .partitions import Partition


def _agree_mask(a: tuple[float, ...], b: tuple[float, ...]) -> int:
    mask = 0
    for i, (x, y) in enumerate(zip(a, b)):
        if x == y:
            mask |= 1 << i
    return mask


@dataclass(frozen=True)
class AgreeSetFamily:
    """Distinct criterion sets on which at least one pair of rows agrees."""

    sets: frozenset[CriterionSet]
    width: int
    source: str

    def sorted_sets(self) -> list[CriterionSet]:
        return sorted(self.sets, key=lambda c: c.sort_key)

    def to_json(self, names: Sequence[str]) -> list[str]:
        rendered = [format_criteria(c, names) for c in self.sets]
        return sorted(rendered, key=lambda s: (len(s), s))


def agree_set(t: Row, u: Row) -> CriterionSet:
    """Criteria on which two distinct rows hold the same value."""
    if t.rowid == u.rowid:
        raise ContractViolation("an agree set needs two distinct rows")
    return CriterionSet(_agree_mask(t.crits, u.crits), len(t.crits))


def group_agree_set(rows: Sequence[Row]) -> CriterionSet:
    """Criteria on which every row of a non-empty group holds the same value.

    A single row agrees with itself everywhere, so singleton groups return the
    full criterion set.
    """
    rows = tuple(rows)
    if not rows:
        raise ContractViolation("agree set of an empty group")
    width = len(rows[0].crits)
    mask = (1 << width) - 1
    first = rows[0].crits
    for row in rows[1:]:
        mask &= _agree_mask(first, row.crits)
        if not mask:
            break
    return CriterionSet(mask, width)


def agree_sets(relation: Relation) -> AgreeSetFamily:
    """Every pairwise agree set of the relation; empty below two rows."""
    rows = relation.rows
    found: set[int] = set()
    for i in range(len(rows)):
        a = rows[i].crits
        for j in range(i + 1, len(rows)):
            found.add(_agree_mask(a, rows[j].crits))
    width = relation.width
    return AgreeSetFamily(frozenset(CriterionSet(m, width) for m in found), width, relation.name)


def equivalence_class(relation: Relation, row: Row, criteria: CriterionSet) -> frozenset[int]:
    """Ids of every row sharing the given row's projection on the criteria."""
    if not (1 <= row.rowid <= len(relation.rows)) or relation.rows[row.rowid - 1] != row:
        raise ContractViolation("row does not belong to the relation")
    idx = tuple(criteria)
    target = tuple(row.crits[i] for i in idx)
    return frozenset(r.rowid for r in relation.rows
                     if tuple(r.crits[i] for i in idx) == target)


def equivalence_partition(relation: Relation, criteria: CriterionSet) -> Partition:
    """Class partition of the row ids under shared projections on the criteria.

    The empty criterion set puts every row in one block; the empty relation
    yields the empty partition.
    """
    if criteria.width != relation.width:
        raise ContractViolation("criteria come from a different declaration")
    idx = tuple(criteria)
    groups: dict[tuple[float, ...], list[int]] = {}
    for row in relation.rows:
        groups.setdefault(tuple(row.crits[i] for i in idx), []).append(row.rowid)
    return Partition.of(groups.values())


def agreed_criteria(relation: Relation, partition: Partition) -> CriterionSet:
    """Largest criterion set on which every block of the partition is in agreement.

    Intersection over blocks of their group agree sets; singleton blocks
    contribute everything, so the empty and all-singleton partitions map to
    the full criterion set.
    """
    if partition.universe != relation.tid:
        raise ContractViolation("partition does not cover the relation")
    mask = (1 << relation.width) - 1
    for block in partition.blocks:
        if len(block) == 1:
            continue
        first = relation.rows[block[0] - 1].crits
        for rowid in block[1:]:
            mask &= _agree_mask(first, relation.rows[rowid - 1].crits)
        if not mask:
            break
    return CriterionSet(mask, relation.width)


def closure(relation: Relation, criteria: CriterionSet) -> CriterionSet:
    """Largest criterion superset inducing the same class partition."""
    return agreed_criteria(relation, equivalence_partition(relation, criteria))


def closure_from_agree_sets(criteria: CriterionSet, family: AgreeSetFamily) -> CriterionSet:
    """The same closure, via intersecting the agree sets that contain the argument.

    An empty intersection, in particular on the full criterion set, closes to
    the full set.
    """
    if criteria.width != family.width:
        raise ContractViolation("criteria come from a different declaration")
    out = CriterionSet.full(family.width)
    for member in family.sets:
        if criteria.issubset(member):
            out = out & member
    return out


def partition_closure(relation: Relation, partition: Partition) -> Partition:
    """Finest class partition that the argument refines."""
    return equivalence_partition(relation, agreed_criteria(relation, partition))


def closed_sets(relation: Relation) -> list[CriterionSet]:
    """Criterion sets equal to their closure, by cardinality then mask.

    Enumerates all subsets, so this is intended for small criterion counts.
    The full set is always closed; the first entry is the unique smallest
    closed set.
    """
    family = agree_sets(relation)
    closed = [c for c in CriterionSet.all_subsets(relation.width)
              if closure_from_agree_sets(c, family) == c]
    closed.sort(key=lambda c: c.sort_key)
    return closed
