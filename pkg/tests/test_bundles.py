from fractions import Fraction
from math import gcd

import pytest

from bundles import (
    dual_twist,
    fiber_type_degrees,
    hec_from_chain,
    hom_dimensions,
    ladder_witness,
    pell_bundle,
    realizable_rank_degree,
    twist_ladder,
)
from errors import MissingPullback, NotCoprime, NotNef, OutOfRange
from geometry import parse_sing_chain
from marking import harvest_chain
from wahl import WahlPair, recognize_wahl


def test_bundles_of_a_pell_chain():
    e0, e1 = hec_from_chain(parse_sing_chain("(0)-[29/5]"))
    assert (e0.rank, e0.degree, e0.c2) == (1, 0, 0)
    assert (e1.rank, e1.degree) == (29, -34)
    assert e1.slope == Fraction(-34, 29)
    assert (e1.degree + 5) % 29 == 0


def test_bundle_numerics_on_small_chains():
    for n in range(2, 15):
        for a in range(1, n):
            try:
                p = WahlPair(n, a)
            except NotCoprime:
                continue
            for c in (0, 1):
                records = hec_from_chain(parse_sing_chain(f"({c})-[{n}/{a}]"))
                assert records[-1].rank == n
                assert (records[-1].degree + a) % n == 0
                assert records[-1].degree == n * (c - 2) + n - a


def test_singular_first_slot_needs_pullback_data():
    with pytest.raises(MissingPullback):
        hec_from_chain(parse_sing_chain("[2/1]-(1)-[5/4]"))


def test_hom_dimensions():
    assert hom_dimensions(parse_sing_chain("(0)-[29/5]")) == [[0, 0], [34, 0]]
    with pytest.raises(NotNef):
        hom_dimensions(parse_sing_chain("[2/1]-(3)"))


def test_pell_bundle():
    b = pell_bundle(8, -4, 0, 1)
    assert (b["rank"], b["degree"]) == (29, -34)
    assert b["companion_degree"] == 5 - 7 * 29
    with pytest.raises(OutOfRange):
        pell_bundle(8, -4, 0, 0)


def test_fiber_type_degrees():
    assert fiber_type_degrees(WahlPair(5, 2), 1) == (7, 8)
    assert dual_twist(5, 7) == -27
    with pytest.raises(OutOfRange):
        fiber_type_degrees(WahlPair(5, 2), -1)


def test_twist_ladder():
    assert twist_ladder(2, 0) == [-13, 5]
    assert 5 in twist_ladder(2, 3)
    with pytest.raises(OutOfRange):
        twist_ladder(1, 3)


def test_twist_ladder_covers_every_unit_residue():
    for n in range(2, 61):
        units = {r for r in range(1, n) if gcd(n, r) == 1}
        assert units <= {x % n for x in twist_ladder(n, 2)}
        for degree in range(-6 * n, 4 * n):
            if degree % n in units:
                w = ladder_witness(n, degree)
                assert w["hirzebruch"] >= 0
                assert recognize_wahl(w["chain"]) is not None


def test_ladder_witness():
    w = ladder_witness(2, 5)
    assert w["hirzebruch"] == 0
    assert w["chain"] == [4]
    assert not w["dual_twist"]


def test_low_degree_is_always_realizable():
    v = realizable_rank_degree(2, 5, 3)
    assert v.realizable
    assert v.witness["blow_ups"] == 1
    assert v.record()["level"] == 3


def test_markov_rank_is_realizable_in_degree_9():
    v = realizable_rank_degree(29, -22, 9)
    assert v.realizable
    assert v.witness["degree"] == 9


def test_harvest_chain_gives_a_certificate():
    p = recognize_wahl(harvest_chain(2, 6))
    v = realizable_rank_degree(p.n, -p.a, 5)
    assert not v.realizable
    assert v.certificate["count"] == 0
    assert "witness" not in v.record()


def test_realizability_errors():
    with pytest.raises(NotCoprime):
        realizable_rank_degree(4, 2, 5)
    with pytest.raises(OutOfRange):
        realizable_rank_degree(4, 1, 10)
    with pytest.raises(OutOfRange):
        realizable_rank_degree(1, 1, 5)
