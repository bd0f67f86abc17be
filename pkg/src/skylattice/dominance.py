"""Dominance tests and skyline computation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractViolation
from .model import CriterionSet, Relation, Row, format_criteria
from .partitions import Partition


@dataclass(frozen=True)
class SkylineResult:
    """Skyline row ids for one criterion subset."""

    criteria: CriterionSet
    rows: frozenset[int]

    @property
    def sorted_rows(self) -> tuple[int, ...]:
        return tuple(sorted(self.rows))

    def to_json(self, names: Sequence[str]) -> dict:
        return {"criteria": format_criteria(self.criteria, names), "rows": list(self.sorted_rows)}


def _require_criteria(criteria: CriterionSet) -> None:
    if not criteria:
        raise ContractViolation("dominance needs at least one criterion")


def dominates(t: Row, u: Row, criteria: CriterionSet) -> bool:
    """Weak dominance: t is no worse than u on every chosen criterion."""
    _require_criteria(criteria)
    tc, uc = t.crits, u.crits
    return all(tc[i] <= uc[i] for i in criteria)


def strictly_dominates(t: Row, u: Row, criteria: CriterionSet) -> bool:
    """Weak dominance with at least one strictly better criterion."""
    _require_criteria(criteria)
    tc, uc = t.crits, u.crits
    better = False
    for i in criteria:
        if tc[i] > uc[i]:
            return False
        if tc[i] < uc[i]:
            better = True
    return better


def dominates_distinct(t: Row, u: Row, criteria: CriterionSet) -> bool:
    """The plain all-<= test.

    Equivalent to strict dominance whenever t and u are known to differ
    somewhere on the chosen criteria; callers own that precondition, nothing
    is checked here beyond the rows being distinct.
    """
    assert t.rowid != u.rowid
    tc, uc = t.crits, u.crits
    return all(tc[i] <= uc[i] for i in criteria)


def projections_distinct(rows: Relation | Iterable[Row], criteria: CriterionSet) -> bool:
    """True when no two rows share their full projection on the chosen criteria."""
    _require_criteria(criteria)
    if isinstance(rows, Relation):
        rows = rows.rows
    idx = tuple(criteria)
    seen = set()
    for row in rows:
        proj = tuple(row.crits[i] for i in idx)
        if proj in seen:
            return False
        seen.add(proj)
    return True


def _scan(projections: list[tuple[float, ...]]) -> list[int]:
    """Indices whose projection no other strictly dominates; equal projections survive together."""
    out = []
    n = len(projections)
    for i in range(n):
        p = projections[i]
        for j in range(n):
            q = projections[j]
            if q == p:
                continue
            for a, b in zip(q, p):
                if a > b:
                    break
            else:
                break
        else:
            out.append(i)
    return out


def _scan_counted(projections: list[tuple[float, ...]]) -> tuple[list[int], int]:
    """Same scan, also counting pairwise dominance tests."""
    out = []
    comparisons = 0
    n = len(projections)
    for i in range(n):
        p = projections[i]
        for j in range(n):
            q = projections[j]
            if q is p:
                continue
            comparisons += 1
            if q == p:
                continue
            for a, b in zip(q, p):
                if a > b:
                    break
            else:
                break
        else:
            out.append(i)
    return out, comparisons


def _scan_presorted(projections: list[tuple[float, ...]]) -> list[int]:
    """Scan after sorting by coordinate sum.

    A strict dominator always has a strictly smaller sum, so each candidate
    only needs to be tested against already-accepted entries.
    """
    order = sorted(range(len(projections)), key=lambda i: (sum(projections[i]), projections[i]))
    accepted: list[int] = []
    for i in order:
        p = projections[i]
        for j in accepted:
            q = projections[j]
            if q == p:
                continue
            for a, b in zip(q, p):
                if a > b:
                    break
            else:
                break
        else:
            accepted.append(i)
    return sorted(accepted)


def skyline(relation: Relation, criteria: CriterionSet, presort: bool = False) -> SkylineResult:
    """Rows not strictly dominated on the chosen criteria.

    The empty criterion set and the empty relation both yield the empty
    skyline. ``presort`` switches to the sum-ordered scan; results are
    identical, only the comparison order changes.
    """
    if criteria.width != relation.width:
        raise ContractViolation("criteria come from a different declaration")
    if not criteria or not relation.rows:
        return SkylineResult(criteria, frozenset())
    cols = relation.columns
    projections = list(zip(*(cols[i] for i in criteria)))
    keep = _scan_presorted(projections) if presort else _scan(projections)
    return SkylineResult(criteria, frozenset(i + 1 for i in keep))


def skyline_with_cost(relation: Relation, criteria: CriterionSet) -> tuple[SkylineResult, int]:
    """Baseline skyline plus the number of pairwise dominance tests performed."""
    if criteria.width != relation.width:
        raise ContractViolation("criteria come from a different declaration")
    if not criteria or not relation.rows:
        return SkylineResult(criteria, frozenset()), 0
    cols = relation.columns
    projections = list(zip(*(cols[i] for i in criteria)))
    keep, comparisons = _scan_counted(projections)
    return SkylineResult(criteria, frozenset(i + 1 for i in keep)), comparisons


def skyline_blocks(relation: Relation, criteria: CriterionSet,
                   partition: Partition) -> frozenset[tuple[int, ...]]:
    """Blocks of the class partition whose members are skyline rows.

    The partition must be the class partition of the relation under a
    criterion set inducing the same classes as ``criteria``; each block is
    then decided by testing one representative against the others. The empty
    criterion set keeps no blocks.
    """
    if partition.universe != relation.tid:
        raise ContractViolation("partition does not cover the relation")
    if not criteria:
        return frozenset()
    idx = tuple(criteria)
    projections = [tuple(relation.row(block[0]).crits[i] for i in idx) for block in partition.blocks]
    keep = _scan(projections)
    return frozenset(partition.blocks[i] for i in keep)
