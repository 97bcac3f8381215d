import pytest
import sympy
from hypothesis import given, strategies as st

from klstab.errors import CoefficientOverflow, ParseError
from klstab.laurent import LaurentPoly, ONE, V, V_INV, ZERO

polys = st.dictionaries(st.integers(-6, 6), st.integers(-50, 50), max_size=5).map(LaurentPoly)
vs = sympy.Symbol("v")


def to_sympy(p):
    return sum((c * vs ** e for e, c in p.items()), sympy.Integer(0))


def test_render():
    assert str(ZERO) == "0"
    assert str(ONE) == "1"
    assert str(V + V_INV) == "v^-1 + v"
    assert str(LaurentPoly({1: 1, 3: 1})) == "v + v^3"
    assert str(LaurentPoly({-1: 1, 0: 2, 3: 3})) == "v^-1 + 2 + 3v^3"
    assert str(LaurentPoly({0: -1, 2: -2})) == "-1 - 2v^2"


def test_parse_examples():
    assert LaurentPoly.parse("v + v^3") == LaurentPoly({1: 1, 3: 1})
    assert LaurentPoly.parse("v^-1 + 2 + 3v^3") == LaurentPoly({-1: 1, 0: 2, 3: 3})
    assert LaurentPoly.parse("0") == ZERO
    with pytest.raises(ParseError):
        LaurentPoly.parse("v^")


def test_bar():
    assert (V + V ** 3).bar() == V_INV + V_INV ** 3
    assert (V + V_INV).bar() == V + V_INV


def test_membership():
    assert (V + V ** 3).in_v_times_N()
    assert not (ONE + V).in_v_times_N()
    assert not (V - V ** 2).is_nonnegative()


def test_overflow():
    big = LaurentPoly({0: 2 ** 62})
    with pytest.raises(CoefficientOverflow):
        big + big
    with pytest.raises(CoefficientOverflow):
        big * LaurentPoly({0: 4})


@given(polys, polys)
def test_arithmetic_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a + b) - (to_sympy(a) + to_sympy(b))) == 0
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert sympy.expand(to_sympy(a - b) - (to_sympy(a) - to_sympy(b))) == 0


@given(polys, polys)
def test_bar_is_ring_involution(a, b):
    assert (a * b).bar() == a.bar() * b.bar()
    assert a.bar().bar() == a


@given(polys)
def test_text_and_json_round_trip(a):
    assert LaurentPoly.parse(str(a)) == a
    assert LaurentPoly.from_json(a.to_json()) == a
    assert hash(LaurentPoly.from_json(a.to_json())) == hash(a)


@given(polys, st.integers(-4, 4))
def test_shift(a, k):
    assert a.shift(k) == a * LaurentPoly({k: 1})


def test_spec_examples():
    assert V * V_INV == ONE
    assert str(V + V_INV) == "v^-1 + v"
    assert (V + V_INV) * (V + V_INV) == LaurentPoly({2: 1, 0: 2, -2: 1})
    assert ONE.bar() == ONE and V.bar() == V_INV
    assert (V + 3 * V_INV ** 2).bar() == V_INV + 3 * V ** 2
    assert (V + V_INV).coeff(1) == 1 and (V + V_INV).coeff(0) == 0


def test_zero():
    assert (V * ZERO) == ZERO and ZERO.terms == {}
    assert (V - V).terms == {}


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a
