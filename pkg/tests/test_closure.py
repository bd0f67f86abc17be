import random

import pytest

from skylattice import (CriterionSet, Partition, Relation, agree_set, agree_sets, agreed_criteria,
                        closed_sets, closure, closure_from_agree_sets, equivalence_class,
                        equivalence_partition, finer_than, group_agree_set, partition_closure)
from skylattice.errors import ContractViolation

from test_dominance import random_relation


def test_agree_set_pairs(housing):
    assert housing.format_criteria(agree_set(housing.row(2), housing.row(5))) == "PV"
    assert housing.format_criteria(agree_set(housing.row(3), housing.row(5))) == "ECV"
    assert agree_set(housing.row(1), housing.row(4)) == CriterionSet.empty(4)
    with pytest.raises(ContractViolation):
        agree_set(housing.row(2), housing.row(2))


def test_group_agree_set(housing):
    group = [housing.row(3), housing.row(4), housing.row(5)]
    assert housing.format_criteria(group_agree_set(group)) == "E"
    assert group_agree_set([housing.row(1)]) == CriterionSet.full(4)
    assert group_agree_set(housing.rows) == CriterionSet.empty(4)
    with pytest.raises(ContractViolation):
        group_agree_set([])


def test_agree_sets_family(housing):
    family = agree_sets(housing)
    assert family.to_json(housing.criteria) == ["", "C", "E", "P", "V", "PV", "ECV"]
    assert family.width == 4
    assert family.source == "housing"
    single = Relation.from_rows("one", ["A", "B"], [[1, 2]])
    assert agree_sets(single).sets == frozenset()
    twins = Relation.from_rows("twins", ["A", "B"], [[1, 2], [1, 2]])
    assert agree_sets(twins).sets == frozenset({CriterionSet.full(2)})


def test_equivalence_class(housing):
    assert equivalence_class(housing, housing.row(2), housing.criterion_set(["P"])) == frozenset({2, 5})
    assert equivalence_class(housing, housing.row(3), housing.criterion_set(["E", "C", "V"])) \
        == frozenset({3, 5})
    assert equivalence_class(housing, housing.row(1), housing.empty_set()) == frozenset({1, 2, 3, 4, 5})
    stranger = Relation.from_rows("other", ["P", "E", "C", "V"], [[0, 0, 0, 0]]).row(1)
    with pytest.raises(ContractViolation):
        equivalence_class(housing, stranger, housing.full_set())


def test_equivalence_partition_golden(housing):
    cases = {
        "": "12345",
        "P": "13|25|4",
        "E": "12|345",
        "C": "1|24|35",
        "V": "1|235|4",
        "PV": "1|25|3|4",
        "ECV": "1|2|35|4",
        "PECV": "1|2|3|4|5",
    }
    for text, expected in cases.items():
        c = housing.criterion_set(list(text))
        assert equivalence_partition(housing, c).text() == expected
    # a non-closed set shares the partition of its closure
    assert equivalence_partition(housing, housing.criterion_set(["E", "C"])).text() == "1|2|35|4"


def test_agreed_criteria(housing):
    assert housing.format_criteria(agreed_criteria(housing, Partition.parse("1|2|35|4"))) == "ECV"
    assert housing.format_criteria(agreed_criteria(housing, Partition.parse("1|2|345"))) == "E"
    assert agreed_criteria(housing, Partition.singletons(range(1, 6))) == CriterionSet.full(4)
    assert agreed_criteria(housing, Partition.single_block(range(1, 6))) == CriterionSet.empty(4)
    with pytest.raises(ContractViolation):
        agreed_criteria(housing, Partition.parse("1|2"))


def test_closure_golden(housing):
    assert housing.format_criteria(closure(housing, housing.criterion_set(["E", "C"]))) == "ECV"
    assert housing.format_criteria(closure(housing, housing.criterion_set(["P", "E"]))) == "PECV"
    assert housing.format_criteria(closure(housing, housing.empty_set())) == ""
    assert housing.format_criteria(closure(housing, housing.criterion_set(["V"]))) == "V"


def test_partition_closure_golden(housing):
    assert partition_closure(housing, Partition.parse("1|2|345")).text() == "12|345"
    # class partitions are fixpoints
    pv = equivalence_partition(housing, housing.criterion_set(["P", "V"]))
    assert partition_closure(housing, pv) == pv


def test_closed_sets_golden(housing):
    names = [housing.format_criteria(c) for c in closed_sets(housing)]
    assert names == ["", "P", "E", "C", "V", "PV", "ECV", "PECV"]


def test_closed_sets_degenerate():
    twins = Relation.from_rows("twins", ["A", "B"], [[1, 2], [1, 2]])
    assert closed_sets(twins) == [CriterionSet.full(2)]
    single = Relation.from_rows("one", ["A", "B"], [[1, 2]])
    assert closed_sets(single) == [CriterionSet.full(2)]
    empty = Relation("none", (), ("A", "B"), ())
    assert closed_sets(empty) == [CriterionSet.full(2)]
    allapart = Relation.from_rows("apart", ["A", "B"], [[1, 2], [3, 4], [5, 6]])
    assert closed_sets(allapart) == [CriterionSet.empty(2), CriterionSet.full(2)]


def test_closure_routes_agree():
    rng = random.Random(23)
    for i in range(60):
        r = random_relation(rng, f"r{i}", n=rng.randint(1, 20))
        family = agree_sets(r)
        for c in CriterionSet.all_subsets(r.width):
            assert closure(r, c) == closure_from_agree_sets(c, family)


def test_closure_laws_random():
    rng = random.Random(29)
    for i in range(40):
        r = random_relation(rng, f"r{i}", n=rng.randint(1, 20))
        family = agree_sets(r)
        closures = {c.mask: closure_from_agree_sets(c, family)
                    for c in CriterionSet.all_subsets(r.width)}
        for c in CriterionSet.all_subsets(r.width):
            h = closures[c.mask]
            assert c.issubset(h)
            assert closures[h.mask] == h
            for step in range(r.width):
                if step not in c:
                    assert h.issubset(closures[c.add(step).mask])
            # the class partition only depends on the closure
            assert equivalence_partition(r, c) == equivalence_partition(r, h)


def test_partition_closure_laws_random():
    rng = random.Random(31)
    for i in range(40):
        r = random_relation(rng, f"r{i}", n=rng.randint(1, 15))
        universe = sorted(r.tid)
        for _ in range(4):
            labels = [rng.randrange(3) for _ in universe]
            groups = {}
            for x, label in zip(universe, labels):
                groups.setdefault(label, []).append(x)
            pi = Partition.of(groups.values())
            closed_pi = partition_closure(r, pi)
            assert finer_than(pi, closed_pi)
            assert partition_closure(r, closed_pi) == closed_pi
            # f o g o f = f
            assert agreed_criteria(r, closed_pi) == agreed_criteria(r, pi)
