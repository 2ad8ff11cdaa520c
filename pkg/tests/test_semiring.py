from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msolwords.errors import MissingIndeterminate, ParseError
from msolwords.semiring import (BOOL, INF, INT, NAT, NEG_INF, RAT, SAMPLES, TROP_MAX, TROP_MIN,
                                Poly, check_semiring_laws, get_semiring, poly_semiring,
                                poly_substitute)

STRATEGIES = {
    BOOL: st.booleans(),
    NAT: st.integers(0, 50),
    INT: st.integers(-50, 50),
    RAT: st.fractions(min_value=-20, max_value=20, max_denominator=12),
    TROP_MIN: st.one_of(st.just(INF), st.integers(-20, 20)),
    TROP_MAX: st.one_of(st.just(NEG_INF), st.integers(-20, 20)),
}

PXY = poly_semiring("X", "Y")


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)),
                                 st.integers(0, 4), max_size=4))
    return Poly(("X", "Y"), terms)


STRATEGIES[PXY] = polys()


@pytest.mark.parametrize("S", list(STRATEGIES), ids=lambda S: S.name)
def test_laws_property(S):
    @settings(max_examples=150, deadline=None)
    @given(STRATEGIES[S], STRATEGIES[S], STRATEGIES[S])
    def check(a, b, c):
        add, mul = S.add, S.mul
        assert add(a, add(b, c)) == add(add(a, b), c)
        assert mul(a, mul(b, c)) == mul(mul(a, b), c)
        assert add(a, b) == add(b, a)
        assert mul(a, b) == mul(b, a)
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
        assert add(a, S.zero) == a
        assert mul(a, S.one) == a
        assert mul(a, S.zero) == S.zero

    check()


@pytest.mark.parametrize("name", sorted(SAMPLES))
def test_law_checker_passes_on_samples(name):
    S = get_semiring(name)
    report = check_semiring_laws(S, SAMPLES[name])
    assert report.passed
    assert all(line.startswith("PASS") for line in report.lines())


def test_law_checker_finds_counterexample():
    broken = RAT.__class__(
        "broken", add=lambda a, b: a - b, mul=lambda a, b: a * b, zero=0, one=1,
        contains=lambda x: True, parse_element=int)
    report = check_semiring_laws(broken, [0, 1, 2])
    assert not report.passed
    assert not report.checked["add_commutative"]
    assert "add_commutative" in report.counterexamples


def test_ring_and_field_extras():
    assert "additive_inverse" in check_semiring_laws(INT, SAMPLES["int"]).checked
    assert check_semiring_laws(RAT, SAMPLES["rat"]).checked["multiplicative_inverse"]


def test_tropical_arithmetic():
    assert TROP_MIN.add(3, 5) == 3 and TROP_MIN.mul(3, 5) == 8
    assert TROP_MIN.add(INF, 4) == 4 and TROP_MIN.mul(INF, 4) == INF
    assert TROP_MAX.add(3, 5) == 5 and TROP_MAX.mul(NEG_INF, 2) == NEG_INF
    assert TROP_MIN.one == 0 and TROP_MIN.zero == INF


@pytest.mark.parametrize("S", [BOOL, NAT, INT, RAT, TROP_MIN, TROP_MAX, PXY], ids=lambda S: S.name)
@pytest.mark.parametrize("n", range(7))
def test_from_nat_is_repeated_one(S, n):
    expected = S.zero
    for _ in range(n):
        expected = S.add(expected, S.one)
    assert S.from_nat(n) == expected


def test_from_nat_values():
    assert TROP_MIN.from_nat(5) == 0
    assert TROP_MIN.from_nat(0) == INF
    assert BOOL.from_nat(3) is True
    assert RAT.from_nat(3) == Fraction(3)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=6), st.integers(0, 6))
def test_power_matches_repeated_product(x, n):
    expected = RAT.one
    for _ in range(n):
        expected = RAT.mul(expected, x)
    assert RAT.power(x, n) == expected


def test_coerce():
    assert RAT.coerce(2) == Fraction(2)
    assert RAT.coerce(True) == 1 and RAT.coerce(False) == 0
    assert TROP_MIN.coerce(True) == 0 and TROP_MIN.coerce(False) == INF
    assert BOOL.coerce(2) is True
    with pytest.raises(TypeError):
        NAT.coerce(-1)


def test_poly_arithmetic_and_parse():
    X = Poly.generator(("X", "Y"), "X")
    Y = Poly.generator(("X", "Y"), "Y")
    p = PXY.parse("X^2 + 2*X*Y + 1")
    assert p == X * X + Poly.constant(("X", "Y"), 2) * X * Y + PXY.one
    assert str(PXY.parse("X*X")) == "X^2"
    assert PXY.add(PXY.zero, Y) == Y


def test_poly_substitute():
    p = PXY.parse("X^2 + 3*Y")
    assert poly_substitute(p, {"X": 2, "Y": Fraction(1, 3)}, RAT) == 5
    assert poly_substitute(p, {"X": 2, "Y": 1}, TROP_MIN) == 1
    with pytest.raises(MissingIndeterminate):
        poly_substitute(p, {"X": 1}, RAT)


@given(polys(), polys(), st.integers(-3, 3), st.integers(-3, 3))
def test_poly_substitute_is_homomorphism(p, q, x, y):
    env = {"X": x, "Y": y}
    assert poly_substitute(p * q, env, INT) == poly_substitute(p, env, INT) * poly_substitute(q, env, INT)
    assert poly_substitute(p + q, env, INT) == poly_substitute(p, env, INT) + poly_substitute(q, env, INT)


def test_get_semiring():
    assert get_semiring("trop-min") is TROP_MIN
    assert get_semiring("poly(X, Y)").gens == ("X", "Y")
    with pytest.raises(ParseError):
        get_semiring("reals")
    with pytest.raises(ValueError):
        poly_semiring("X", "X")


def test_parse_literals():
    assert RAT.parse("1/2") == Fraction(1, 2)
    assert TROP_MIN.parse("inf") == INF
    assert TROP_MAX.parse("-inf") == NEG_INF
    assert BOOL.parse("true") is True
    with pytest.raises(ParseError):
        NAT.parse("-3")
    with pytest.raises(ParseError):
        RAT.parse("1/0")
