from fractions import Fraction

import pytest

from errors import InvalidChain, NoSlide, NotDegree8, SingularSystem
from geometry import (
    SingChain,
    build_w_hat,
    degree8_fiber_class,
    discrepancy_magnitudes,
    k_squared,
    parse_sing_chain,
    pullback_coefficient,
    slide,
    slide_numerics,
    solve_tridiagonal,
    toric_contraction,
)
from marking import canonical_markings, find_marking, parse_marking
from wahl import SMOOTH, WahlPair, recognize_wahl


def marking_of(row):
    central, k = parse_marking(row["marking"])
    return find_marking(WahlPair(row["n"], row["a"]), central, k)


def test_discrepancies():
    assert discrepancy_magnitudes((4,)) == (Fraction(1, 2),)
    assert discrepancy_magnitudes((5, 2)) == (Fraction(2, 3), Fraction(1, 3))
    assert pullback_coefficient((4,), 1) == Fraction(1, 4)


def test_singular_system():
    with pytest.raises(SingularSystem):
        solve_tridiagonal((1, 1), [Fraction(0), Fraction(0)])


def test_parse_sing_chain():
    s = parse_sing_chain("[2/1]-(3)")
    assert s.sings == (WahlPair(2, 1), SMOOTH)
    assert s.cs == (3,)
    assert str(s) == "[2/1]-(3)"
    assert s.full_chain() == (4, 3)
    assert s.k_intersections() == (Fraction(3, 2),)
    assert s.deltas() == (3,)
    assert str(parse_sing_chain("(0)-[4/3]-(1)")) == "(0)-[4/3]-(1)"


def test_sing_chain_errors():
    with pytest.raises(InvalidChain):
        parse_sing_chain("[2/1][3/1]")
    with pytest.raises(InvalidChain):
        SingChain((SMOOTH,), (1,))


def test_resolution_graph():
    graph = parse_sing_chain("[2/1]-(3)").resolution_graph()
    assert [c.self_intersection for c in graph.curves] == [-4, -3]
    assert graph.discrepancies() == (Fraction(1, 2), Fraction(0))
    assert graph.pairing(0, 1) == 1


def test_worked_slides(golden):
    for row in golden["slides"]:
        assert list(slide(row["chain"], row["i"], "left").chain) == row["left"]
        assert list(slide(row["chain"], row["i"], "right").chain) == row["right"]


def test_slide_target():
    sl = slide((2, 2, 2, 7), 2, "left")
    assert sl.pair == WahlPair(2, 1)
    assert sl.target == (2, 1, 2, 7)


def test_slide_bounds():
    with pytest.raises(NoSlide):
        slide((2, 2, 2, 7), 1, "left")
    with pytest.raises(NoSlide):
        slide((2, 2, 2, 7), 4, "right")
    with pytest.raises(NoSlide):
        slide_numerics(WahlPair(5, 4), 5)


def test_markov_slide_numerics():
    num = slide_numerics(recognize_wahl((2, 2, 2, 7)), 2)
    assert (num.n1, num.a1, num.n2, num.a2, num.delta) == (2, 1, 13, 11, 3)
    assert num.gamma_sq == Fraction(1, 25)
    assert num.markov


def test_mori_slide_numerics():
    num = slide_numerics(recognize_wahl((3, 2, 2, 7, 2)), 2)
    assert (num.n1, num.a1, num.delta) == (3, 1, 3)
    assert num.n1 + num.n2 == num.delta * 9
    assert not num.markov


def test_w_hat_worked_examples(golden):
    for row in golden["w_hat"]:
        m = marking_of(row)
        w = build_w_hat(m)
        assert str(w.chain) == row["chain"]
        assert w.degree == row["degree"]
        assert k_squared(m) == row["degree"]
        assert all(k <= 0 for k in w.k_curves)


def test_w_hat_family(golden):
    fam = golden["w_hat_family"]
    for x in fam["x"]:
        w = build_w_hat(canonical_markings(recognize_wahl((2,) * x + (x + 4,)))[0])
        assert str(w.chain) == fam["template"].format(x1=x + 1, x2=x + 2, x3=x + 3, x4=x + 4)


def test_toric_contraction_of_markov_surface():
    m = find_marking(WahlPair(29, 22), 4, (2, 1, 2, 10, 2, 2, 2, 2, 1, 5))
    w = build_w_hat(m)
    assert str(w.chain) == "[2/1]-(1)-[29/22]-(1)-[5/4]"
    assert w.nef
    assert sorted(str(t) for t in toric_contraction(w)) == ["1x[2/1]", "1x[29/22]", "1x[5/4]"]


def test_degree8_classes(golden):
    for row in golden["degree8_classes"]:
        assert degree8_fiber_class(marking_of(row)).surface == row["surface"]


def test_degree8_needs_degree8():
    m = find_marking(WahlPair(29, 22), 4, (2, 1, 2, 10, 2, 2, 2, 2, 1, 5))
    with pytest.raises(NotDegree8):
        degree8_fiber_class(m)
