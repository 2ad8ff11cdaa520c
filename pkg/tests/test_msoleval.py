import random
from fractions import Fraction

import pytest

from msolwords import mso, msoleval as me
from msolwords.errors import MissingIndeterminate, ParseError, UnboundVariable
from msolwords.randgen import Scope, random_mso, random_term, random_word, weights_for
from msolwords.semiring import (BOOL, INF, INT, NAT, NEG_INF, RAT, TROP_MAX, TROP_MIN,
                                poly_semiring, poly_substitute)
from msolwords.words import enumerate_words

from oracles import one_blocks, powerset, term_value

WORDS3 = [str(w) for w in enumerate_words("01", 3)]
WORDS5 = [str(w) for w in enumerate_words("01", 5)]


@pytest.mark.parametrize("S", [RAT, TROP_MIN, TROP_MAX], ids=lambda S: S.name)
@pytest.mark.parametrize("seed", range(25))
def test_random_terms_match_brute_force(S, seed):
    t = random_term(random.Random(seed), 3, weights_for(S), set_budget=1)
    for w in WORDS3:
        assert me.eval_term(t, w, None, S) == term_value(t, w, {}, S), (str(t), w)


def test_count_ones():
    for w in WORDS5:
        assert me.eval_term(me.count_ones(), w, None, RAT) == w.count("1")


def test_block_counts():
    for w in WORDS5:
        n = len(one_blocks(w))
        assert me.eval_term(me.block_count(), w, None, RAT) == n
        assert me.eval_term(me.block_count_by_first(), w, None, RAT) == n


def test_extreme_block_size():
    t = me.extreme_block_size()
    for w in WORDS5:
        blocks = one_blocks(w)
        assert me.eval_term(t, w, None, TROP_MAX) == (max(blocks) if blocks else NEG_INF)
        assert me.eval_term(t, w, None, TROP_MIN) == (min(blocks) if blocks else INF)


def test_indeterminate_base():
    PX = poly_semiring("X")
    t = me.x_to_count_ones("X")
    assert me.eval_term(t, "0110", None, PX) == PX.parse("X^2")
    assert me.eval_term(t, "0110", None, RAT, subst={"X": 3}) == 9
    with pytest.raises(MissingIndeterminate):
        me.eval_term(t, "0110", None, RAT)
    assert me.indeterminates(t) == {"X"}


def test_zero_base_is_one_on_empty_count():
    t = me.StdMonomial(0, "v", mso.Letter("1", "v"))
    assert me.eval_term(t, "000", None, RAT) == 1
    assert me.eval_term(t, "010", None, RAT) == 0
    t = me.StdMonomial(INF, "v", mso.Letter("1", "v"))
    assert me.eval_term(t, "000", None, TROP_MIN) == 0
    assert me.eval_term(t, "010", None, TROP_MIN) == INF


ALL_SEMIRINGS = [BOOL, NAT, INT, RAT, TROP_MIN, TROP_MAX, poly_semiring("X")]


@pytest.mark.parametrize("S", ALL_SEMIRINGS, ids=lambda S: S.name)
def test_tv_term_is_indicator(S):
    rng = random.Random(11)
    for _ in range(200):
        phi = random_mso(rng, 2, Scope(fo=("x",)))
        w = random_word(rng, 3)
        x = rng.randint(0, len(w))
        expected = S.one if mso.satisfies(w, {"x": x}, phi) else S.zero
        assert me.eval_term(me.tv_term(phi), w, {"x": x}, S) == expected


@pytest.mark.parametrize("S", ALL_SEMIRINGS, ids=lambda S: S.name)
def test_empty_ranges(S):
    assert me.eval_term(me.SetSum(("R",), mso.FALSE, me.Const(True)), "01", None, S) == S.zero
    assert me.eval_term(me.FoSum("v", mso.FALSE, me.Const(True)), "01", None, S) == S.zero
    two = S.add(S.one, S.one)
    assert me.eval_term(me.StdMonomial(two, "v", mso.FALSE), "01", None, S) == S.one


@pytest.mark.parametrize("S", [RAT, TROP_MIN], ids=lambda S: S.name)
@pytest.mark.parametrize("seed", range(100))
def test_term_sum_and_product(S, seed):
    rng = random.Random(seed)
    a = random_term(rng, 2, weights_for(S), set_budget=1)
    b = random_term(rng, 2, weights_for(S), set_budget=1)
    for w in WORDS3:
        va, vb = me.eval_term(a, w, None, S), me.eval_term(b, w, None, S)
        assert me.eval_term(me.term_sum(a, b), w, None, S) == S.add(va, vb)
        assert me.eval_term(me.term_product(a, b), w, None, S) == S.mul(va, vb)


@pytest.mark.parametrize("seed", range(20))
def test_conditional(seed):
    rng = random.Random(seed)
    t = random_term(rng, 2, weights_for(RAT), set_budget=1)
    psi = mso.Letter("1", "x")
    c = me.conditional(psi, t, {"x"})
    for w in WORDS3:
        for x in range(len(w) + 1):
            got = me.eval_term(c, w, {"x": x}, RAT)
            if mso.satisfies(w, {"x": x}, psi):
                assert got == me.eval_term(t, w, None, RAT)
            else:
                assert got == 1


def test_const_term_forms():
    for c in (Fraction(3), 0, True):
        t = me.const_term(c, as_monomial=True)
        for w in WORDS3:
            assert me.eval_term(t, w, None, RAT) == RAT.coerce(c)
    assert me.eval_term(me.const_term(False, as_monomial=True), "01", None, RAT) == 0


@pytest.mark.parametrize("seed", range(40))
def test_sexpr_roundtrip(seed):
    S = TROP_MIN if seed % 2 else RAT
    t = random_term(random.Random(seed), 3, weights_for(S))
    assert me.parse_term(me.to_sexpr(t, S), S) == t


def test_free_vars_and_unbound():
    t = me.FoSum("v", mso.Leq("v", "x"), me.StdMonomial(2, "u", mso.In("u", "X")))
    assert me.free_vars(t) == (frozenset({"x"}), frozenset({"X"}))
    assert me.eval_term(t, "000", {"x": 2, "X": {1, 2}}, RAT) == 12
    assert term_value(t, "000", {"x": 2, "X": frozenset({1, 2})}, RAT) == 12
    with pytest.raises(UnboundVariable):
        me.eval_term(t, "000", {"x": 1}, RAT)


def test_quantifier_rank():
    assert me.quantifier_rank(me.block_count()) == mso.quantifier_rank(mso.block1("B"))
    assert me.quantifier_rank(me.count_ones()) == 0


def test_partition_plan_is_exhaustive():
    t = me.SetSum(("A", "B"), mso.Partition(("A", "B")), me.Const(1))
    for w in WORDS3:
        assert me.eval_term(t, w, None, RAT) == 2 ** (len(w) + 1)
    t = me.SetSum(("A",), mso.PosSet("A"), me.Const(1))
    assert me.eval_term(t, "011", None, RAT) == 8
    assert len(powerset(range(1, 4))) == 8


@pytest.mark.parametrize("text", [
    "(mon 2 v)",
    "(sumset (R R) true (const 1))",
    "(sumel v true (sumel v true (const 1)))",
    "(mon (ind) v true)",
    "(frob)",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        me.parse_term(text, RAT)


def _with_indeterminates(t, rng):
    """Replace some constant monomial bases by the indeterminates X or Y."""
    if isinstance(t, me.StdMonomial):
        return me.StdMonomial(me.Ind(rng.choice("XY")), t.var, t.guard) if rng.random() < 0.6 else t
    if isinstance(t, me.Product):
        return me.Product(tuple(_with_indeterminates(f, rng) for f in t.factors))
    if isinstance(t, (me.SetSum, me.FoSum)):
        return type(t)(t.vars if isinstance(t, me.SetSum) else t.var, t.guard,
                       _with_indeterminates(t.body, rng))
    return t


def test_poly_evaluation_commutes_with_substitution():
    PXY = poly_semiring("X", "Y")
    rng = random.Random(12)
    for _ in range(100):
        t = _with_indeterminates(random_term(rng, 2, (0, 1, 2), set_budget=1), rng)
        w = random_word(rng, 3)
        subst = {"X": rng.choice([0, 1, 2, 3]), "Y": rng.choice([0, 1, 5])}
        p = me.eval_term(t, w, None, PXY)
        assert poly_substitute(p, subst, INT) == me.eval_term(t, w, None, INT, subst=subst)
        # bool reads every natural literal through 1+...+1; tropical carriers
        # would take the literal 0 as their own unit instead
        assert poly_substitute(p, subst, BOOL) == me.eval_term(t, w, None, BOOL, subst=subst)
