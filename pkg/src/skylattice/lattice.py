"""Concept lattices over closed criterion sets.

An agree concept pairs a closed criterion set with its class partition; a
skyline concept keeps only the classes whose rows survive the skyline filter.
Both lattices share the same node order and cover edges, so indices are
stable across the two views and across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence, Union

from .closure import agree_sets, closure, closure_from_agree_sets, equivalence_partition, partition_closure
from .dominance import skyline_blocks
from .errors import ContractViolation, SchemaError
from .model import CriterionSet, Relation, format_criteria, parse_criteria
from .partitions import Partition, partition_product, partition_sum


@dataclass(frozen=True)
class AgreeConcept:
    """Closed criterion set with its class partition."""

    intension: CriterionSet
    extension: Partition


@dataclass(frozen=True)
class SkylineConcept:
    """Closed criterion set with the class blocks whose rows are skyline rows.

    The bottom concept on the empty criterion set keeps its single full block
    for display; the empty-criteria cuboid itself is empty.
    """

    intension: CriterionSet
    blocks: tuple[tuple[int, ...], ...]


Concept = Union[AgreeConcept, SkylineConcept]


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts ordered by intension inclusion, with their cover edges.

    Concepts are sorted by intension cardinality then mask; edges are pairs of
    concept indices (lower, upper) forming the transitive reduction of the
    inclusion order.
    """

    kind: str
    criteria: tuple[str, ...]
    concepts: tuple[Concept, ...]
    edges: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.concepts)

    @property
    def bottom(self) -> Concept:
        return self.concepts[0]

    @property
    def top(self) -> Concept:
        return self.concepts[-1]

    @cached_property
    def _index(self) -> dict[int, int]:
        return {c.intension.mask: i for i, c in enumerate(self.concepts)}

    def index_of(self, criteria: CriterionSet) -> int | None:
        """Position of the concept with this intension, or None if not closed."""
        return self._index.get(criteria.mask)


def _cover_edges(sets: Sequence[CriterionSet]) -> tuple[tuple[int, int], ...]:
    """Transitive reduction of proper inclusion on a (cardinality, mask) sorted list."""
    edges = []
    n = len(sets)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = sets[i], sets[j]
            if a.mask == b.mask or not a.issubset(b):
                continue
            direct = True
            for k in range(i + 1, j):
                between = sets[k]
                if between.mask != a.mask and between.mask != b.mask \
                        and a.issubset(between) and between.issubset(b):
                    direct = False
                    break
            if direct:
                edges.append((i, j))
    return tuple(edges)


def build_agree_lattice(relation: Relation) -> ConceptLattice:
    """All agree concepts of the relation with their cover edges."""
    family = agree_sets(relation)
    closed = [c for c in CriterionSet.all_subsets(relation.width)
              if closure_from_agree_sets(c, family) == c]
    closed.sort(key=lambda c: c.sort_key)
    concepts = tuple(AgreeConcept(c, equivalence_partition(relation, c)) for c in closed)
    return ConceptLattice("agree", relation.criteria, concepts, _cover_edges(closed))


def build_skyline_lattice(relation: Relation) -> ConceptLattice:
    """The agree lattice with every extension filtered down to its skyline blocks."""
    agree = build_agree_lattice(relation)
    concepts = []
    for concept in agree.concepts:
        if not concept.intension:
            blocks = concept.extension.blocks
        else:
            keep = skyline_blocks(relation, concept.intension, concept.extension)
            blocks = tuple(sorted(keep))
        concepts.append(SkylineConcept(concept.intension, blocks))
    return ConceptLattice("skyline", agree.criteria, tuple(concepts), agree.edges)


def concept_meet(concepts: Iterable[AgreeConcept], relation: Relation) -> AgreeConcept:
    """Greatest common lower bound: intersect intensions, merge and close extensions."""
    pool = list(concepts)
    if not pool:
        raise ContractViolation("meet of no concepts; use the lattice bottom instead")
    intension = reduce(lambda a, b: a & b, (c.intension for c in pool))
    merged = reduce(partition_sum, (c.extension for c in pool))
    return AgreeConcept(intension, partition_closure(relation, merged))


def concept_join(concepts: Iterable[AgreeConcept], relation: Relation) -> AgreeConcept:
    """Least common upper bound: close the union of intensions, intersect extensions."""
    pool = list(concepts)
    if not pool:
        raise ContractViolation("join of no concepts; use the lattice top instead")
    union = reduce(lambda a, b: a | b, (c.intension for c in pool))
    extension = reduce(partition_product, (c.extension for c in pool))
    return AgreeConcept(closure(relation, union), extension)


def _single_digit_ids(lattice: ConceptLattice) -> bool:
    for concept in lattice.concepts:
        blocks = concept.extension.blocks if isinstance(concept, AgreeConcept) else concept.blocks
        for block in blocks:
            if any(x < 0 or x > 9 for x in block):
                return False
    return True


def _blocks_text(blocks: Sequence[Sequence[int]], single_digits: bool) -> str:
    if single_digits:
        return "|".join("".join(str(x) for x in block) for block in blocks)
    return "|".join(",".join(str(x) for x in block) for block in blocks)


def _concept_fields(lattice: ConceptLattice) -> list[tuple[str, str]]:
    single = _single_digit_ids(lattice)
    out = []
    for concept in lattice.concepts:
        intension = format_criteria(concept.intension, lattice.criteria)
        blocks = concept.extension.blocks if isinstance(concept, AgreeConcept) else concept.blocks
        out.append((intension, _blocks_text(blocks, single)))
    return out


def to_dot(lattice: ConceptLattice) -> str:
    """Stable DOT rendering of the cover diagram, drawn bottom to top."""
    lines = [f"digraph {lattice.kind}_concepts {{", "  rankdir=BT;", "  node [shape=box];"]
    for i, (intension, extension) in enumerate(_concept_fields(lattice)):
        label = f"({intension or '∅'}, {extension})"
        lines.append(f'  n{i} [label="{label}"];')
    for i, j in lattice.edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_json(lattice: ConceptLattice) -> dict:
    """JSON form with stable concept indices referenced by the edge list."""
    concepts = [{"intension": intension, "extension": extension}
                for intension, extension in _concept_fields(lattice)]
    return {
        "kind": lattice.kind,
        "criteria": list(lattice.criteria),
        "concepts": concepts,
        "edges": [list(edge) for edge in lattice.edges],
    }


def lattice_from_json(obj: dict) -> ConceptLattice:
    """Rebuild a lattice from :func:`lattice_json` output."""
    try:
        kind = obj["kind"]
        criteria = tuple(obj["criteria"])
        concepts = []
        for entry in obj["concepts"]:
            intension = parse_criteria_text(entry["intension"], criteria)
            extension = Partition.parse(entry["extension"])
            if kind == "agree":
                concepts.append(AgreeConcept(intension, extension))
            else:
                concepts.append(SkylineConcept(intension, extension.blocks))
        edges = tuple((int(i), int(j)) for i, j in obj["edges"])
        return ConceptLattice(kind, criteria, tuple(concepts), edges)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed lattice payload: {exc}") from None


def parse_criteria_text(text: str, names: Sequence[str]) -> CriterionSet:
    """Parse the canonical criterion text, concatenated or comma-separated."""
    if all(len(name) == 1 for name in names) and "," not in text:
        return parse_criteria(",".join(text), names)
    return parse_criteria(text, names)
