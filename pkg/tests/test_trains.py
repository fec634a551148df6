import pytest

from cfkernel import CQS
from errors import InvalidChain, NoBar, NotExtremal, NotMarkovMutation, OutOfRange
from geometry import parse_sing_chain
from trains import divisorial_train, find_bar, flip_train_over_wahl, flipping_trains, markov_train
from wahl import WahlPair


def wagons(train):
    return [str(w) for w in train.wagons]


def test_flip_trains_over_1_11(golden):
    row = golden["trains"]["flip"]
    trains = flipping_trains(parse_sing_chain(row["extremal"]), 4)
    assert [wagons(t) for t in trains] == row["trains"]
    for t in trains:
        assert t.delta == row["delta"]
        assert t.base == CQS(11, 3)
        assert t.kind == "Flip"
        assert len(t.orientations) == 3


def test_divisorial_train(golden):
    row = golden["trains"]["divisorial"]
    t = divisorial_train(WahlPair(row["n"], row["a"]), len(row["wagons"]))
    assert wagons(t) == row["wagons"]
    assert t.indices == [2, 4, 6]
    assert str(t.base) == "1/4(1,1)"
    assert t.complete


def test_flip_train_over_wahl(golden):
    row = golden["trains"]["flip_over_wahl"]
    (t,) = flip_train_over_wahl(WahlPair(row["n"], row["a"]), len(row["wagons"]))
    assert wagons(t) == row["wagons"]


def test_markov_train(golden):
    row = golden["trains"]["markov"]
    t = markov_train(row["chain"], row["i"], len(row["wagons"]))
    assert wagons(t) == row["wagons"]
    assert t.indices == row["indices"]
    assert t.kind == "Markov"


def test_long_trains_keep_their_bars():
    for t in flipping_trains(parse_sing_chain("[2/1]-(3)"), 12):
        assert len(t.wagons) == 12
        assert all(w.bar is not None for w in t.wagons[1:])
    t = divisorial_train(WahlPair(3, 1), 10)
    assert all(w.bar is not None for w in t.wagons[1:])


def test_find_bar():
    assert find_bar((2, 2, 6), CQS(4, 1)) == 2
    with pytest.raises(NoBar):
        find_bar((4,), CQS(11, 3))
    with pytest.raises(InvalidChain):
        find_bar((2, 2), CQS(4, 1))


def test_train_errors():
    with pytest.raises(NotExtremal):
        flipping_trains(parse_sing_chain("(3)-(4)-(2)"), 3)
    with pytest.raises(NotExtremal):
        flipping_trains(parse_sing_chain("[2/1]-(1)"), 3)
    with pytest.raises(NotMarkovMutation):
        markov_train((3, 2, 2, 7, 2), 2, 3)
    with pytest.raises(OutOfRange):
        divisorial_train(WahlPair(2, 1), 0)


def test_train_record():
    rec = divisorial_train(WahlPair(2, 1), 3).record()
    assert rec["kind"] == "DC"
    assert rec["delta"] == 2
    assert rec["wagons"] == ["[4]", "[2,2*,6]", "[2,2,2,2*,8]"]
