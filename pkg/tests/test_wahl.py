import pytest

from errors import InvalidChain, NotCoprime, OutOfRange, Sentinel
from wahl import (
    SMOOTH,
    WahlPair,
    generate_wahl,
    post_center,
    recognize_wahl,
    slot_chain,
    wahl_center,
    wahl_chain,
    wahl_dual,
)


def test_wahl_chain(golden):
    census = golden["census"]
    assert wahl_chain(WahlPair(census["n"], census["a"])) == tuple(census["chain"])
    assert wahl_chain(WahlPair(2, 1)) == (4,)
    assert wahl_chain(WahlPair(3, 1)) == (5, 2)
    assert wahl_chain(WahlPair(9, 4)) == (3, 2, 2, 7, 2)


def test_recognize_wahl():
    assert recognize_wahl((3, 2, 2, 7, 2)) == WahlPair(9, 4)
    assert recognize_wahl((2, 5)) == WahlPair(3, 2)
    assert recognize_wahl((2, 2)) is None
    assert recognize_wahl((2, 1, 2)) is None
    assert recognize_wahl(()) is None


def test_pair_validation():
    with pytest.raises(NotCoprime):
        WahlPair(4, 2)
    with pytest.raises(OutOfRange):
        WahlPair(3, 3)
    assert SMOOTH.is_smooth
    assert str(SMOOTH) == "[]"
    assert str(WahlPair(29, 22)) == "[29/22]"


def test_reversed():
    assert WahlPair(29, 22).reversed() == WahlPair(29, 7)
    assert SMOOTH.reversed() is SMOOTH
    assert wahl_chain(WahlPair(9, 4).reversed()) == (2, 7, 2, 2, 3)


def test_reversal_law():
    for n in range(2, 80):
        for a in range(1, n):
            try:
                p = WahlPair(n, a)
            except NotCoprime:
                continue
            chain = wahl_chain(p)
            assert wahl_chain(p.reversed()) == chain[::-1]
            assert recognize_wahl(chain) == p


def test_sentinel_has_no_chain():
    assert slot_chain(SMOOTH) == ()
    with pytest.raises(Sentinel):
        wahl_chain(SMOOTH)
    with pytest.raises(Sentinel):
        wahl_dual(SMOOTH)


def test_generate_wahl():
    found = list(generate_wahl(3))
    chains = [chain for _, chain, _ in found]
    assert chains[0] == (4,)
    assert set(chains) == {(4,), (5, 2), (2, 5), (6, 2, 2), (2, 5, 3), (3, 5, 2), (2, 2, 6)}
    for p, chain, center in found:
        assert wahl_chain(p) == chain
        assert sum(chain) == 3 * len(chain) + 1
        assert wahl_center(chain)[0] == center


def test_generate_wahl_needs_length():
    with pytest.raises(OutOfRange):
        list(generate_wahl(0))


def test_center_and_post_center():
    assert wahl_center((2, 2, 6)) == (3, ["R", "R"])
    assert post_center((2, 2, 6)) == 2
    assert wahl_center((6, 2, 2)) == (1, ["L", "L"])
    assert post_center((6, 2, 2)) == 2
    assert post_center((4,)) is None
    with pytest.raises(InvalidChain):
        wahl_center((3, 3))


def test_wahl_dual():
    assert wahl_dual(WahlPair(2, 1)) == (2, 2, 2)
    assert wahl_dual(WahlPair(3, 1)) == (2, 2, 2, 3)
