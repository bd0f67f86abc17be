"""Full skycube materialization and the partial, closure-indexed store.

The full skycube keeps one skyline per non-empty criterion subset. The
partial store keeps only the skyline concepts. A query on criteria C finds
the smallest closed superset of C, takes one representative per stored
block there, reruns the skyline test among those representatives on C, and
expands the surviving blocks; representatives of distinct blocks never share
a projection on C, so the cheap all-<= test decides dominance.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .dominance import SkylineResult, skyline, skyline_with_cost, _scan_counted
from .errors import ContractViolation, SchemaError
from .lattice import (ConceptLattice, build_skyline_lattice, lattice_from_json, lattice_json,
                      parse_criteria_text)
from .model import CriterionSet, Relation, format_criteria


def worker_count() -> int:
    """Worker cap from SKYLATTICE_THREADS; defaults to single-threaded."""
    raw = os.environ.get("SKYLATTICE_THREADS", "1")
    try:
        count = int(raw)
    except ValueError:
        return 1
    return max(1, count)


@dataclass(frozen=True)
class Skycube:
    """Skylines of every non-empty criterion subset, keyed by subset."""

    relation_name: str
    criteria: tuple[str, ...]
    cuboids: dict[CriterionSet, frozenset[int]]

    def sorted_subsets(self) -> list[CriterionSet]:
        return sorted(self.cuboids, key=lambda c: c.sort_key)

    def to_json(self) -> dict:
        cuboids = {format_criteria(c, self.criteria): sorted(self.cuboids[c])
                   for c in self.sorted_subsets()}
        return {"relation": self.relation_name, "criteria": list(self.criteria), "cuboids": cuboids}

    @classmethod
    def from_json(cls, obj: dict) -> Skycube:
        try:
            criteria = tuple(obj["criteria"])
            cuboids = {parse_criteria_text(text, criteria): frozenset(int(r) for r in rows)
                       for text, rows in obj["cuboids"].items()}
            return cls(obj["relation"], criteria, cuboids)
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"malformed skycube payload: {exc}") from None


def build_skycube(relation: Relation, presort: bool = False, workers: int | None = None) -> Skycube:
    """Compute every cuboid by the baseline scan.

    ``workers`` above one spreads the independent subsets over a thread pool;
    the result does not depend on the worker count. Defaults to the
    SKYLATTICE_THREADS cap.
    """
    subsets = [c for c in CriterionSet.all_subsets(relation.width) if c]
    subsets.sort(key=lambda c: c.sort_key)
    if workers is None:
        workers = worker_count()
    if workers > 1 and len(subsets) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: skyline(relation, c, presort).rows, subsets))
    else:
        results = [skyline(relation, c, presort).rows for c in subsets]
    return Skycube(relation.name, relation.criteria, dict(zip(subsets, results)))


class PartialSkycube:
    """Skyline concepts indexed by closed criterion set, answering every cuboid."""

    def __init__(self, relation: Relation, lattice: ConceptLattice):
        if lattice.kind != "skyline":
            raise ContractViolation("a partial skycube stores skyline concepts")
        if lattice.criteria != relation.criteria:
            raise ContractViolation("lattice and relation declare different criteria")
        self.relation = relation
        self.lattice = lattice
        self._by_mask = {c.intension.mask: c for c in lattice.concepts}
        self._closure_cache: dict[int, CriterionSet] = {}

    @classmethod
    def build(cls, relation: Relation) -> PartialSkycube:
        return cls(relation, build_skyline_lattice(relation))

    def closure_of(self, criteria: CriterionSet) -> CriterionSet:
        """Smallest stored intension containing the criteria."""
        if criteria.width != self.relation.width:
            raise ContractViolation("criteria come from a different declaration")
        cached = self._closure_cache.get(criteria.mask)
        if cached is None:
            mask = (1 << self.relation.width) - 1
            for stored in self._by_mask:
                if criteria.mask & stored == criteria.mask:
                    mask &= stored
            cached = CriterionSet(mask, self.relation.width)
            self._closure_cache[criteria.mask] = cached
        return cached

    def reconstruct(self, criteria: CriterionSet) -> SkylineResult:
        rows, _ = self.reconstruct_with_cost(criteria)
        return SkylineResult(criteria, rows)

    def reconstruct_with_cost(self, criteria: CriterionSet) -> tuple[frozenset[int], int]:
        """Cuboid rows plus the number of dominance tests spent answering.

        Closed criteria expand their stored blocks verbatim at zero cost; the
        empty set answers the empty skyline.
        """
        if criteria.width != self.relation.width:
            raise ContractViolation("criteria come from a different declaration")
        if not criteria:
            return frozenset(), 0
        stored = self._by_mask.get(criteria.mask)
        if stored is not None:
            return frozenset(x for block in stored.blocks for x in block), 0
        concept = self._by_mask[self.closure_of(criteria).mask]
        idx = tuple(criteria)
        rows = self.relation.rows
        projections = [tuple(rows[block[0] - 1].crits[i] for i in idx) for block in concept.blocks]
        keep, comparisons = _scan_counted(projections)
        out: set[int] = set()
        for k in keep:
            out.update(concept.blocks[k])
        return frozenset(out), comparisons

    def to_json(self) -> dict:
        return {"relation": self.relation.to_json(), "lattice": lattice_json(self.lattice)}

    @classmethod
    def from_json(cls, obj: dict) -> PartialSkycube:
        try:
            relation = Relation.from_json(obj["relation"])
            lattice = lattice_from_json(obj["lattice"])
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed store payload: {exc}") from None
        return cls(relation, lattice)


def materialize_partial(relation: Relation) -> PartialSkycube:
    """Build the partial store for a relation."""
    return PartialSkycube.build(relation)


def reconstruct_cuboid(partial: PartialSkycube, criteria: CriterionSet) -> SkylineResult:
    """Answer one cuboid from the partial store."""
    return partial.reconstruct(criteria)


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of checking every reconstructed cuboid against the full skycube."""

    total: int
    mismatches: tuple[tuple[str, tuple[int, ...], tuple[int, ...]], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        return f"{self.total - len(self.mismatches)}/{self.total} cuboids equal"


def verify_equivalence(partial: PartialSkycube, full: Skycube) -> EquivalenceReport:
    """Compare every cuboid of the full skycube with its reconstruction."""
    if partial.relation.criteria != full.criteria or partial.relation.name != full.relation_name:
        raise ContractViolation("stores were built from different relations")
    mismatches = []
    for criteria in full.sorted_subsets():
        expected = full.cuboids[criteria]
        got = partial.reconstruct(criteria).rows
        if got != expected:
            mismatches.append((format_criteria(criteria, full.criteria),
                               tuple(sorted(expected)), tuple(sorted(got))))
    return EquivalenceReport(len(full.cuboids), tuple(mismatches))


@dataclass(frozen=True)
class CompressionStats:
    """Size and work figures comparing the partial store with the full skycube.

    Stored row-id counts exclude the display-only bottom concept. Per-query
    entries pair each subset with the dominance tests a reconstruction spends
    against those of a fresh baseline scan.
    """

    concepts: int
    cuboids: int
    stored_rowids_partial: int
    stored_rowids_full: int
    representatives: int
    comparisons_reconstruct: int
    comparisons_scan: int
    per_query: tuple[tuple[str, int, int], ...]


def compression_stats(partial: PartialSkycube, full: Skycube) -> CompressionStats:
    """Recompute all reported figures from the two stores."""
    if partial.relation.criteria != full.criteria or partial.relation.name != full.relation_name:
        raise ContractViolation("stores were built from different relations")
    payload = [c for c in partial.lattice.concepts if c.intension]
    stored_partial = sum(len(block) for concept in payload for block in concept.blocks)
    stored_full = sum(len(rows) for rows in full.cuboids.values())
    reps = sum(len(concept.blocks) for concept in payload)
    per_query = []
    total_reconstruct = 0
    total_scan = 0
    for criteria in full.sorted_subsets():
        _, cost = partial.reconstruct_with_cost(criteria)
        _, scan_cost = skyline_with_cost(partial.relation, criteria)
        per_query.append((format_criteria(criteria, full.criteria), cost, scan_cost))
        total_reconstruct += cost
        total_scan += scan_cost
    return CompressionStats(
        concepts=len(partial.lattice.concepts),
        cuboids=len(full.cuboids),
        stored_rowids_partial=stored_partial,
        stored_rowids_full=stored_full,
        representatives=reps,
        comparisons_reconstruct=total_reconstruct,
        comparisons_scan=total_scan,
        per_query=tuple(per_query),
    )
