from math import gcd

import pytest

from cfkernel import CQS, expand, is_zero_cf
from errors import ExcludedChain, InvalidMarking, OutOfRange
from marking import (
    canonical_markings,
    christophersen_stevens,
    classify_markings,
    count_zero_cfs,
    enumerate_zero_cf_assignments,
    fiber_type_markings,
    find_marking,
    format_marking,
    harvest_chain,
    marking_degree_histogram,
    parse_marking,
    realizability_report,
    realizable_degrees,
    type_one_markings,
)
from wahl import WahlPair, generate_wahl, recognize_wahl, wahl_dual


def assert_marking_laws(m):
    assert 1 <= m.degree <= 9
    assert m.degree == 9 - sum(m.weights)
    for side in (m.left, m.right):
        if len(side.k) >= 2:
            assert is_zero_cf(side.k)


def test_catalan_counts():
    assert [count_zero_cfs(s) for s in range(2, 7)] == [1, 2, 5, 14, 42]
    with pytest.raises(OutOfRange):
        count_zero_cfs(1)


def test_christophersen_stevens():
    assert len(christophersen_stevens(CQS(19, 7))) == 3
    assert christophersen_stevens(CQS(4, 1)) == [(1, 2, 1), (2, 1, 2)]


def test_census_of_29_22(golden):
    census = golden["census"]
    p = WahlPair(census["n"], census["a"])
    markings = classify_markings(p)
    assert len(markings) == census["formal_count"] == 18
    strict = classify_markings(p, formal=False)
    assert len(strict) == census["strict_count"]
    labels = [format_marking(m) for m in markings]
    assert census["degree9"] in labels
    assert census["degree8"] in labels
    for m in strict:
        assert_marking_laws(m)


def test_formal_census_adds_markings_with_a_negative_tail():
    p = WahlPair(29, 22)
    strict = {format_marking(m) for m in classify_markings(p, formal=False)}
    extra = {format_marking(m): m.degree for m in classify_markings(p) if format_marking(m) not in strict}
    assert extra == {
        "[2,1,2,u{10},2,1,1,1,1,2]": 3,
        "[1,2,1,u{10},2,1,1,1,1,2]": 2,
        "[2,1,1,4,1,2,2,2,2,u{5}]": 1,
    }
    # [2,1,1,1,1,2] evaluates to 0 through the tail -1
    assert not is_zero_cf((2, 1, 1, 1, 1, 2))
    for m in classify_markings(p):
        assert 1 <= m.degree <= 9
        assert m.degree == 9 - sum(m.weights)


def test_realizable_degrees_use_the_strict_census():
    p = recognize_wahl(harvest_chain(2, 7))
    formal = {format_marking(m): m.degree for m in classify_markings(p) if m.degree >= 5}
    assert formal == {"[2,1,1,2,2,2,1,4,2,u{9}]": 5, "[2,2,1,2,2,2,1,3,2,u{9}]": 5}
    assert max(realizable_degrees(p)) == 4


def test_degree_histogram():
    hist = marking_degree_histogram(WahlPair(29, 22))
    assert hist == {1: 5, 2: 4, 3: 2, 4: 3, 5: 1, 6: 1, 8: 1, 9: 1}
    strict = marking_degree_histogram(WahlPair(29, 22), formal=False)
    assert strict == {1: 4, 2: 3, 3: 1, 4: 3, 5: 1, 6: 1, 8: 1, 9: 1}


def test_degree_four_markings(golden):
    row = golden["degree4_markings"]
    p = recognize_wahl(row["chain"])
    got = sorted(format_marking(m) for m in classify_markings(p) if m.degree == 4)
    assert got == sorted(row["markings"])


def test_degree_eight_markings_of_n29(golden):
    for row in golden["n29_degree8"]:
        got = sorted(format_marking(m) for m in classify_markings(WahlPair(29, row["a"])) if m.degree == 8)
        assert got == sorted(row["markings"])


def test_single_entry_chain():
    (m,) = classify_markings(WahlPair(2, 1))
    assert format_marking(m) == "[u{4}]"
    assert m.degree == 9


def test_marking_record():
    m = find_marking(WahlPair(29, 22), 4, (2, 1, 2, 10, 2, 2, 2, 2, 1, 5))
    rec = m.record()
    assert rec["kind"] == "II"
    assert rec["degree"] == 9
    assert rec["central_index"] == 4
    assert rec["left"] == [2, 1, 2]
    assert rec["right"] == [2, 2, 2, 2, 1, 5]


def test_find_marking_rejects_unknown():
    with pytest.raises(InvalidMarking):
        find_marking(WahlPair(29, 22), 4, (2, 2, 2, 10, 2, 2, 2, 2, 2, 5))


def test_parse_marking():
    assert parse_marking("[2,1,2,u{10},2,2,2,2,1,5]") == (4, (2, 1, 2, 10, 2, 2, 2, 2, 1, 5))
    assert parse_marking("[1,_7_,2]") == (2, (1, 7, 2))
    with pytest.raises(InvalidMarking):
        parse_marking("[2,1]")
    with pytest.raises(InvalidMarking):
        parse_marking("[u{2},u{3}]")


def test_canonical_markings(golden):
    for row in golden["canonical_markings"]:
        got = [format_marking(m) for m in canonical_markings(recognize_wahl(row["chain"]))]
        assert got == row["markings"]


def test_canonical_degrees():
    first, last = canonical_markings(recognize_wahl((2, 2, 2, 5, 5)))
    assert (first.degree, last.degree) == (4, 5)


@pytest.mark.parametrize("x", [2, 3, 4, 7])
def test_canonical_marking_of_degree_eight(x):
    first, last = canonical_markings(recognize_wahl((2,) * x + (x + 4,)))
    assert last.degree == 8
    assert format_marking(last) == "[" + ",".join(["1"] + ["2"] * (x - 2) + ["1"]) + f",u{{{x + 4}}}]"


def test_canonical_markings_are_in_the_census():
    for _, chain, _ in generate_wahl(9):
        if chain in ((4,), (5, 2), (2, 5)):
            continue
        p = recognize_wahl(chain)
        census = {(m.central, m.k) for m in classify_markings(p, formal=False)}
        for m in canonical_markings(p):
            assert (m.central, m.k) in census


@pytest.mark.parametrize("chain", [(4,), (5, 2), (2, 5)])
def test_canonical_markings_excluded(chain):
    with pytest.raises(ExcludedChain):
        canonical_markings(recognize_wahl(chain))


def test_type_one_markings():
    (m,) = type_one_markings(WahlPair(5, 2), 5)
    assert format_marking(m) == "[u{3},1,1]"
    assert type_one_markings(WahlPair(2, 1), 9)[0].degree == 9
    with pytest.raises(OutOfRange):
        type_one_markings(WahlPair(5, 2), 0)


def test_enumerate_zero_cf_assignments():
    assert enumerate_zero_cf_assignments((2, 2), max_weight=0) == []
    (a,) = enumerate_zero_cf_assignments((2, 2), max_weight=1)
    assert a.k == (1, 1)
    assert a.weight == 1
    assert enumerate_zero_cf_assignments(())[0].is_absent
    assert enumerate_zero_cf_assignments((5,)) == []


def test_realizable_degrees():
    assert realizable_degrees(WahlPair(29, 22)) == frozenset(range(1, 10))
    report = realizability_report(WahlPair(2, 1))
    assert report["max_degree"] == 9
    assert "note" in report


def test_fiber_type_markings():
    (fm,) = fiber_type_markings(WahlPair(2, 1))
    assert fm.degree == 5
    for n, a in [(5, 2), (7, 3), (29, 22)]:
        assert all(fm.degree <= 4 for fm in fiber_type_markings(WahlPair(n, a)))


def test_harvest_chain_is_never_high_degree():
    chain = harvest_chain(2, 6)
    assert chain == (2, 2, 2, 2, 2, 2, 6, 2, 8)
    p = recognize_wahl(chain)
    assert p is not None
    assert all(d <= 4 for d in realizable_degrees(p))


def test_weight_zero_assignments_are_wahl_duals():
    duals = {wahl_dual(WahlPair(n, a)) for n in range(2, 11) for a in range(1, n) if gcd(n, a) == 1}
    found = set()
    for m in range(3, 101):
        for q in range(1, m):
            if gcd(m, q) != 1:
                continue
            chain = expand(m, q)
            if len(chain) >= 2 and enumerate_zero_cf_assignments(chain, max_weight=0):
                found.add(chain)
    assert found == duals
