from fractions import Fraction
from math import gcd
import random

import pytest

from cfkernel import (
    CQS,
    blow_down_step,
    blow_up_step,
    concat_with_one,
    dual,
    evaluate,
    expand,
    format_chain,
    is_zero_cf,
    matrix_of,
    minimal_model,
    mod_inverse,
    parse_chain,
)
from errors import InvalidChain, NotContractible, NotCoprime, OutOfRange


def test_evaluate_wahl_chain():
    assert evaluate((3, 2, 2, 7, 2)) == Fraction(81, 35)


def test_expand_inverts_evaluate():
    assert expand(81, 35) == (3, 2, 2, 7, 2)
    assert expand(Fraction(19, 7)) == (3, 4, 2)


def test_expand_rejects_bad_input():
    with pytest.raises(OutOfRange):
        expand(5, 5)
    with pytest.raises(NotCoprime):
        expand(8, 2)


def test_evaluate_rejects_nonpositive_tail():
    with pytest.raises(InvalidChain):
        evaluate(())
    with pytest.raises(InvalidChain):
        evaluate((2, 1, 1, 2))


def test_blow_up_then_down():
    assert blow_up_step((1, 1), 1) == (2, 1, 2)
    assert blow_up_step((2, 2), 0) == (1, 3, 2)
    assert blow_down_step((2, 1, 2), 2) == (1, 1)


def test_blow_down_needs_a_one():
    with pytest.raises(NotContractible):
        blow_down_step((2, 2, 2), 2)
    with pytest.raises(NotContractible):
        blow_down_step((1, 1), 1)


def test_minimal_model_contracts_ones():
    assert minimal_model((2, 1, 2)) == (1, 1)
    assert minimal_model((3, 1, 2, 2)) == (1, 1)
    assert minimal_model((5, 2, 1, 3, 2, 2, 7, 2)) == (5, 2)
    assert minimal_model((3, 2, 2)) == (3, 2, 2)


def test_minimal_model_is_independent_of_contraction_order():
    rng = random.Random(11)
    for m in range(2, 40):
        for q in range(1, m):
            if gcd(m, q) != 1:
                continue
            base = expand(m, q)
            chain = base
            for _ in range(rng.randint(1, 6)):
                chain = blow_up_step(chain, rng.randint(0, len(chain)))
            assert minimal_model(chain) == base
            while 1 in chain:
                ones = [i + 1 for i, e in enumerate(chain) if e == 1]
                chain = blow_down_step(chain, rng.choice(ones))
            assert chain == base


def test_zero_continued_fractions():
    assert is_zero_cf((1, 1))
    assert is_zero_cf((1, 2, 1))
    assert is_zero_cf((2, 1, 2))
    assert not is_zero_cf((2, 2))
    assert not is_zero_cf((1,))


def test_dual_of_a_wahl_chain():
    assert dual((4,)) == (2, 2, 2)
    assert dual((2, 2, 2)) == (4,)
    assert is_zero_cf(concat_with_one((3, 2, 2, 7, 2), dual((3, 2, 2, 7, 2))[::-1]))


def test_dual_needs_minimal_chain():
    with pytest.raises(InvalidChain):
        dual((2, 1, 2))


def test_matrix_of():
    assert matrix_of((2,)) == ((2, -1), (1, 0))
    (m, _), (q, _) = matrix_of((3, 2, 2, 7, 2))
    assert (m, q) == (81, 35)


def test_mod_inverse():
    assert mod_inverse(3, 5) == 2
    assert mod_inverse(4, 1) == 0
    with pytest.raises(NotCoprime):
        mod_inverse(2, 4)


def test_cqs():
    c = CQS(19, 7)
    assert c.chain() == (3, 4, 2)
    assert str(c) == "1/19(1,7)"
    assert c.reversed() == CQS(19, 11)
    assert CQS.of_chain((3, 1, 3)) == CQS(3, 2)
    with pytest.raises(OutOfRange):
        CQS(4, 5)
    with pytest.raises(NotCoprime):
        CQS(4, 2)


def test_chain_literals():
    assert parse_chain("[3,2,2,7,2]") == ((3, 2, 2, 7, 2), None)
    assert parse_chain("[2,2*,6]") == ((2, 2, 6), 2)
    assert parse_chain("[]") == ((), None)
    assert format_chain((2, 2, 6), 2) == "[2,2*,6]"
    assert format_chain(()) == "[]"


def test_chain_literal_errors():
    with pytest.raises(InvalidChain):
        parse_chain("[2,x]")
    with pytest.raises(InvalidChain):
        parse_chain("[2*,2*]")
