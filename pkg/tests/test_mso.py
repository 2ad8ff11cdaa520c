import random

import pytest

from msolwords import mso
from msolwords.errors import ParseError, UnboundVariable
from msolwords.randgen import Scope, random_mso
from msolwords.words import enumerate_words, word_to_structure

from oracles import holds, one_blocks, powerset

WORDS3 = [str(w) for w in enumerate_words("01", 3)]


def _closed(seed, depth=3, macros=True):
    return random_mso(random.Random(seed), depth, Scope(), "01", macros)


@pytest.mark.parametrize("seed", range(120))
def test_compiled_matches_naive(seed):
    phi = _closed(seed)
    for w in WORDS3:
        assert mso.satisfies(w, {}, phi) == holds(phi, w, {}), (mso.to_sexpr(phi), w)


@pytest.mark.parametrize("seed", range(60))
def test_macros_agree_with_expansion(seed):
    phi = _closed(seed)
    expanded = mso.expand_all(phi)
    f, g = mso.compile_formula(phi), mso.compile_formula(expanded)
    for w in WORDS3:
        s = word_to_structure(w)
        assert f(s, {}) == g(s, {})


@pytest.mark.parametrize("seed", range(60))
def test_sexpr_roundtrip(seed):
    phi = _closed(seed)
    assert mso.parse_formula(mso.to_sexpr(phi)) == phi


def test_macros_with_free_variables():
    cases = [mso.Pos("x"), mso.First("x"), mso.Last("x"), mso.Succ("x", "y"),
             mso.Empty("X"), mso.Full("X"), mso.PosSet("X"), mso.PredIn("x", "X"),
             mso.Partition(("X", "Y"))]
    for w in ["", "1", "01", "110"]:
        n = len(w)
        for phi in cases:
            for x in range(n + 1):
                for y in range(n + 1):
                    for X in powerset(range(n + 1)):
                        for Y in (frozenset(), frozenset(range(n + 1)) - X):
                            env = {"x": x, "y": y, "X": X, "Y": Y}
                            assert mso.satisfies(w, env, phi) == holds(phi, w, env)


def test_macro_meanings():
    w = "0110"
    assert mso.satisfies(w, {"x": 0}, mso.First("x"))
    assert mso.satisfies(w, {"x": 4}, mso.Last("x"))
    assert not mso.satisfies(w, {"x": 0}, mso.Pos("x"))
    assert mso.satisfies(w, {"x": 2, "y": 3}, mso.Succ("x", "y"))
    assert mso.satisfies(w, {"x": 3, "X": {2}}, mso.PredIn("x", "X"))
    assert mso.satisfies("", {"x": 0}, mso.Last("x"))


def test_block1_matches_run_lengths():
    phi = mso.block1("B")
    for w in [str(v) for v in enumerate_words("01", 5)]:
        blocks = sorted(len(B) for B in powerset(range(len(w) + 1))
                        if mso.satisfies(w, {"B": B}, phi))
        assert blocks == sorted(one_blocks(w)), w


def test_block1_count_up_to_length_8():
    f = mso.compile_formula(mso.block1("B"))
    for w in enumerate_words("01", 8):
        s = word_to_structure(w)
        count = sum(f(s, {"B": m}) for m in range(1 << (s.n + 1)))
        assert count == len(one_blocks(str(w))), str(w)


def test_first_in_block_counts_blocks():
    phi = mso.first_in_block("v")
    for w in [str(v) for v in enumerate_words("01", 5)]:
        firsts = sum(mso.satisfies(w, {"v": i}, phi) for i in range(len(w) + 1))
        assert firsts == len(one_blocks(w))


def test_interval():
    assert mso.satisfies("0000", {"U": {1, 2, 3}}, mso.interval("U"))
    assert not mso.satisfies("0000", {"U": {1, 3}}, mso.interval("U"))


def test_relativize():
    phi = mso.Exists("x", mso.Letter("1", "x"))
    rel = mso.relativize(phi, "U")
    assert mso.satisfies("0110", {"U": {2}}, rel)
    assert not mso.satisfies("0110", {"U": {1, 4}}, rel)
    every = mso.ForallSet("X", mso.Exists("y", mso.In("y", "X")))
    assert not mso.satisfies("01", {}, every)
    assert not mso.satisfies("01", {"U": {1}}, mso.relativize(every, "U"))


def test_free_vars_and_rank():
    phi = mso.Exists("x", mso.And((mso.Leq("x", "y"), mso.ForallSet("X", mso.In("x", "X")),
                                   mso.In("y", "Z"))))
    assert mso.free_vars(phi) == (frozenset({"y"}), frozenset({"Z"}))
    assert mso.quantifier_rank(phi) == 2
    with pytest.raises(UnboundVariable):
        mso.satisfies("01", {"y": 1}, phi)


@pytest.mark.parametrize("text", [
    "(and (in X x) (forall X (letter 1 X)))",
    "(letter 1)",
    "(bogus x)",
    "(exists x (in x x))",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        mso.parse_formula(text)
