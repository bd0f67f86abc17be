import json
import random

import pytest

from skylattice import (CriterionSet, PartialSkycube, Relation, build_skycube, closure,
                        compression_stats, materialize_partial, reconstruct_cuboid, skyline,
                        verify_equivalence)
from skylattice.errors import ContractViolation

from test_dominance import random_relation

FIGURE_CUBOIDS = {
    "P": {2, 5}, "E": {3, 4, 5}, "C": {2, 4}, "V": {2, 3, 5},
    "PE": {5}, "PC": {2}, "EC": {4}, "PV": {2, 5}, "EV": {3, 5}, "CV": {2},
    "PEC": {2, 4, 5}, "PEV": {5}, "PCV": {2}, "ECV": {2, 3, 4, 5}, "PECV": {2, 4, 5},
}


def test_full_skycube_golden(housing):
    cube = build_skycube(housing)
    named = {housing.format_criteria(c): set(rows) for c, rows in cube.cuboids.items()}
    assert named == FIGURE_CUBOIDS
    assert len(cube.cuboids) == 15


def test_skycube_json_round_trip(housing):
    cube = build_skycube(housing)
    payload = json.loads(json.dumps(cube.to_json()))
    assert payload["cuboids"]["PECV"] == [2, 4, 5]
    assert list(payload["cuboids"])[:4] == ["P", "E", "C", "V"]
    from skylattice.skycube import Skycube
    again = Skycube.from_json(payload)
    assert again == cube


def test_skycube_worker_count_does_not_change_results(housing, monkeypatch):
    serial = build_skycube(housing)
    threaded = build_skycube(housing, workers=4)
    assert serial == threaded
    monkeypatch.setenv("SKYLATTICE_THREADS", "3")
    from skylattice import worker_count
    assert worker_count() == 3
    assert build_skycube(housing) == serial
    monkeypatch.setenv("SKYLATTICE_THREADS", "bogus")
    assert worker_count() == 1


def test_reconstruction_walkthroughs(housing):
    partial = materialize_partial(housing)
    ec = housing.criterion_set(["E", "C"])
    assert housing.format_criteria(partial.closure_of(ec)) == "ECV"
    assert reconstruct_cuboid(partial, ec).rows == frozenset({4})
    pe = housing.criterion_set(["P", "E"])
    assert housing.format_criteria(partial.closure_of(pe)) == "PECV"
    assert reconstruct_cuboid(partial, pe).rows == frozenset({5})
    # closed sets expand their stored blocks verbatim, at zero comparison cost
    ecv = housing.criterion_set(["E", "C", "V"])
    rows, cost = partial.reconstruct_with_cost(ecv)
    assert rows == frozenset({2, 3, 4, 5})
    assert cost == 0
    assert reconstruct_cuboid(partial, housing.empty_set()).rows == frozenset()
    with pytest.raises(ContractViolation):
        partial.reconstruct(CriterionSet.full(2))


def test_every_cuboid_reconstructs(housing):
    partial = materialize_partial(housing)
    for c in CriterionSet.all_subsets(4):
        if not c:
            continue
        assert reconstruct_cuboid(partial, c).rows == skyline(housing, c).rows


def test_verify_equivalence(housing):
    report = verify_equivalence(materialize_partial(housing), build_skycube(housing))
    assert report.ok
    assert report.total == 15
    assert report.summary() == "15/15 cuboids equal"
    other = Relation.from_rows("other", ["A"], [[1.0]])
    with pytest.raises(ContractViolation):
        verify_equivalence(materialize_partial(housing), build_skycube(other))


def test_store_json_round_trip(housing):
    partial = materialize_partial(housing)
    payload = json.loads(json.dumps(partial.to_json()))
    again = PartialSkycube.from_json(payload)
    assert again.relation == housing
    assert again.lattice == partial.lattice
    for c in CriterionSet.all_subsets(4):
        assert again.reconstruct(c).rows == partial.reconstruct(c).rows


def test_compression_stats(housing):
    stats = compression_stats(materialize_partial(housing), build_skycube(housing))
    assert stats.concepts == 8
    assert stats.cuboids == 15
    assert stats.stored_rowids_partial == 19
    assert stats.stored_rowids_full == 30
    assert stats.representatives == 11
    assert len(stats.per_query) == 15
    closed = {"P", "E", "C", "V", "PV", "ECV", "PECV"}
    for name, reconstruct_cost, scan_cost in stats.per_query:
        if name in closed:
            assert reconstruct_cost == 0
        assert scan_cost > 0


def test_reconstruction_touches_only_representatives():
    # heavy duplication: reconstruction work is bounded by class counts, not row counts
    values = [[i % 3, (i // 3) % 2] for i in range(60)]
    r = Relation.from_rows("dup", ["A", "B"], values)
    partial = materialize_partial(r)
    stats = compression_stats(partial, build_skycube(r))
    n = len(r.rows)
    assert stats.representatives < stats.concepts * n
    for c in CriterionSet.all_subsets(r.width):
        if not c:
            continue
        concept_index = partial.lattice.index_of(partial.closure_of(c))
        blocks = partial.lattice.concepts[concept_index].blocks
        _, cost = partial.reconstruct_with_cost(c)
        assert cost <= len(blocks) * (len(blocks) - 1)
        assert len(blocks) <= n


def test_reconstruction_matches_scan_randomly():
    rng = random.Random(43)
    for i in range(60):
        r = random_relation(rng, f"r{i}", n=rng.randint(2, 25))
        partial = materialize_partial(r)
        for c in CriterionSet.all_subsets(r.width):
            if not c:
                continue
            assert partial.reconstruct(c).rows == skyline(r, c).rows
            assert partial.closure_of(c) == closure(r, c)


def test_empty_and_single_row_relations():
    empty = Relation("none", (), ("A", "B"), ())
    partial = materialize_partial(empty)
    assert len(partial.lattice.concepts) == 1
    assert partial.reconstruct(CriterionSet.full(2)).rows == frozenset()
    report = verify_equivalence(partial, build_skycube(empty))
    assert report.ok and report.total == 3
    single = Relation.from_rows("one", ["A", "B"], [[1, 2]])
    partial_single = materialize_partial(single)
    assert len(partial_single.lattice.concepts) == 1
    assert partial_single.reconstruct(CriterionSet.of([0], 2)).rows == frozenset({1})
