import pytest

from cfkernel import CQS
from errors import BoundTooSmall
from marking import classify_markings, find_marking, parse_marking
from toric import (
    build_fake_wpp,
    cone_type,
    det,
    extremal_p_resolutions,
    hodge_inequality,
    m_resolutions,
    side_value,
    wahl_cone,
)
from wahl import WahlPair


def test_cones():
    assert det((1, 0), (0, 1)) == 1
    assert cone_type((1, 0), (0, 1)) == (1, 0)
    assert cone_type((1, 0), (-1, 4)) == (4, 1)
    assert cone_type((1, 0), (-7, 19)) == (19, 7)
    assert wahl_cone(4, 1) == WahlPair(2, 1)
    assert wahl_cone(9, 2) == WahlPair(3, 1)
    assert wahl_cone(5, 1) is None


def test_m_resolutions_of_1_19(golden):
    row = golden["m_resolutions"]
    got = [str(s) for s in m_resolutions(CQS(row["delta"], row["omega"]))]
    assert sorted(got) == sorted(row["chains"])


def test_m_resolutions_respect_bound():
    with pytest.raises(BoundTooSmall):
        m_resolutions(CQS(19, 7), length_bound=2)


def test_extremal_p_resolutions():
    assert [str(s) for s in extremal_p_resolutions(CQS(4, 1))] == ["(4)"]
    assert "[2/1]-(3)" in [str(s) for s in extremal_p_resolutions(CQS(11, 3))]


def test_fake_wpp_worked_example(golden):
    row = golden["fake_wpp"]
    central, k = parse_marking(row["marking"])
    w = build_fake_wpp(find_marking(WahlPair(row["n"], row["a"]), central, k))
    assert list(w.weights) == row["weights"]
    assert (w.d, w.m1, w.q1, w.m2, w.q2) == (row["d"], row["m1"], row["q1"], row["m2"], row["q2"])
    assert pow(w.q1, -1, w.m1) == row["q1_inv"]
    assert pow(w.q2, -1, w.m2) == row["q2_inv"]
    assert w.mu == 1
    assert w.covering() == tuple(row["weights"])


def test_fake_wpp_for_every_marking_of_small_chains():
    for n, a in [(5, 2), (7, 3), (8, 3), (13, 2)]:
        for m in classify_markings(WahlPair(n, a), formal=False):
            w = build_fake_wpp(m)
            assert w.hodge_ok
            assert (n * n) % w.mu == 0


def test_hodge_inequality():
    assert hodge_inequality(27, 5, 22, 6)
    assert hodge_inequality(29, 4, 25, 9)
    assert not hodge_inequality(29, 4, 25, 10)


def test_side_value():
    assert side_value(()) == (1, 0)
    assert side_value((3,)) == (3, 1)
    assert side_value((2, 2)) == (3, 2)
