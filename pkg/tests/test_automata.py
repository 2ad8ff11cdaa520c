import random
from fractions import Fraction

import pytest

from msolwords import automata as A
from msolwords.errors import FieldRequired, ParseError, RankNotSaturated
from msolwords.msoleval import compile_term, eval_term
from msolwords.randgen import random_automaton, random_word
from msolwords.semiring import INF, RAT, TROP_MAX, TROP_MIN
from msolwords.words import enumerate_words, word_to_structure

from oracles import automaton_value, gauss_rank

WORDS4 = [str(w) for w in enumerate_words("01", 4)]


@pytest.mark.parametrize("S", [RAT, TROP_MIN, TROP_MAX], ids=lambda S: S.name)
@pytest.mark.parametrize("seed", range(20))
def test_run_matches_matrix_products(S, seed):
    aut = random_automaton(random.Random(seed), S)
    for w in WORDS4:
        assert A.run(aut, w) == automaton_value(S, aut.alpha, aut.mu, aut.gamma, w)


def test_count_ones_automaton():
    aut = A.count_ones_automaton()
    for w in WORDS4:
        assert A.run(aut, w) == w.count("1")
    assert A.run(A.left_quotient(aut, "1"), "1") == 2


def test_example_automaton_run_and_term():
    aut = A.WeightedAutomaton.build(RAT, "01", [2], [1], {"0": [[3]], "1": [[5]]})
    assert A.run(aut, "01") == 30
    assert eval_term(A.automaton_to_msoleval(aut), "01", None, RAT) == 30


@pytest.mark.parametrize("S", [RAT, TROP_MIN], ids=lambda S: S.name)
@pytest.mark.parametrize("seed", range(15))
def test_term_of_automaton(S, seed):
    aut = random_automaton(random.Random(seed), S, max_size=2)
    f = compile_term(A.automaton_to_msoleval(aut), S)
    for w in WORDS4:
        assert f(word_to_structure(w), {}) == A.run(aut, w)


@pytest.mark.parametrize("S", [RAT, TROP_MIN], ids=lambda S: S.name)
def test_quotient_identity(S):
    rng = random.Random(3)
    for _ in range(50):
        aut = random_automaton(rng, S)
        u, v = random_word(rng, 4), random_word(rng, 4)
        assert A.run(aut, u + v) == A.run(A.left_quotient(aut, u), v)


def test_hankel_ranks_against_oracle():
    for f in (A.count_ones_fn, A.sq_fn, A.const_fn(3)):
        for n in range(4):
            H = A.truncated_hankel(f, n)
            assert A.hankel_rank(H) == gauss_rank(H.entries)
    assert A.hankel_ranks(A.count_ones_fn, 3) == [0, 2, 2, 2]
    assert A.hankel_ranks(A.sq_fn, 4) == [1, 2, 3, 4, 5]


def test_hankel_entry():
    H = A.truncated_hankel(A.sq_fn, 1)
    assert H.entry("1", "1") == 16
    assert H.entry("", "") == 1


def test_hankel_needs_field():
    with pytest.raises(FieldRequired):
        A.truncated_hankel(A.count_ones_fn, 2, "01", TROP_MIN)
    with pytest.raises(FieldRequired):
        A.learn_automaton(A.count_ones_fn, 2, "01", TROP_MIN)


def test_learn_count_ones():
    aut = A.learn_automaton(A.count_ones_fn, 2)
    assert aut.size == 2
    for w in [str(v) for v in enumerate_words("01", 6)]:
        assert A.run(aut, w) == w.count("1")


def test_learn_constant_and_zero():
    assert A.learn_automaton(A.const_fn(5), 1).size == 1
    zero = A.learn_automaton(A.const_fn(0), 1)
    assert all(A.run(zero, w) == 0 for w in WORDS4)


def test_learn_rejects_sq():
    with pytest.raises(RankNotSaturated):
        A.learn_automaton(A.sq_fn, 2)


@pytest.mark.parametrize("seed", range(25))
def test_learn_random_automata_minimal(seed):
    aut = random_automaton(random.Random(seed), RAT, size=3)
    f = lambda w: A.run(aut, w)  # noqa: E731
    learned = A.learn_automaton(f, 3, verify_len=6)
    assert learned.size <= 3
    # the zero function still gets one (dead) state
    assert learned.size == max(1, A.hankel_rank(A.truncated_hankel(f, 3)))
    for w in [str(v) for v in enumerate_words("01", 6)]:
        assert A.run(learned, w) == f(w)


def test_quotient_closure():
    report = A.quotient_closure_check(A.count_ones_automaton(), 4)
    assert report.stable and report.dimension == 2
    assert report.generators == ["", "1"]
    assert report.checked == 31


def test_file_roundtrip():
    rng = random.Random(7)
    for S in (RAT, TROP_MIN, TROP_MAX):
        aut = random_automaton(rng, S, weights=(0, 1, Fraction(1, 2)) if S is RAT else None)
        again = A.read_automaton(A.write_automaton(aut))
        assert again == aut and again.S is S


def test_read_automaton_errors():
    with pytest.raises(ParseError):
        A.read_automaton("alphabet: 01\nsize: 1\nalpha: 1\n")
    with pytest.raises((ParseError, ValueError)):
        A.read_automaton("alphabet: 01\nsize: 1\nalpha: 1\ngamma: 1\nmu 0:\n 1\n")


def test_automaton_validation():
    with pytest.raises(ValueError):
        A.WeightedAutomaton.build(RAT, "01", [1], [1, 2], {"0": [[1]], "1": [[1]]})
    with pytest.raises(ValueError):
        A.WeightedAutomaton.build(RAT, "01", [1], [1], {"0": [[1]]})


def test_tropical_run_is_shortest_path():
    aut = A.WeightedAutomaton.build(TROP_MIN, "01", [0, INF], [INF, 0],
                                    {"0": [[0, 5], [INF, 0]], "1": [[0, 1], [INF, 0]]})
    assert A.run(aut, "") == INF
    assert A.run(aut, "001") == 1
    assert A.run(aut, "000") == 5


@pytest.mark.parametrize("seed", range(30))
def test_hankel_rank_bounded_by_size(seed):
    aut = random_automaton(random.Random(seed), RAT)
    f = lambda w: A.run(aut, w)  # noqa: E731
    assert all(r <= aut.size for r in A.hankel_ranks(f, 3))
