import pytest
from hypothesis import given
from hypothesis import strategies as st

from msolwords.errors import UnknownLetter
from msolwords.words import (Assignment, Word, enumerate_words, mask_to_set, set_to_mask,
                             word_to_structure)


def test_structure_encoding():
    s = word_to_structure("0110")
    assert s.n == 4 and list(s.universe) == [0, 1, 2, 3, 4]
    assert s.predicate("1") == {2, 3}
    assert s.predicate("0") == {1, 4}
    assert s.letters[0] is None and s.letters[2] == "1"


def test_empty_word():
    s = word_to_structure("")
    assert s.size == 1 and s.predicate("1") == frozenset()


def test_unknown_letter():
    with pytest.raises(UnknownLetter):
        Word("012")
    with pytest.raises(ValueError):
        Word("a", "aa")


def test_enumerate_words_order_and_count():
    words = [str(w) for w in enumerate_words("01", 2)]
    assert words == ["", "0", "1", "00", "01", "10", "11"]
    assert sum(1 for _ in enumerate_words("abc", 3)) == 1 + 3 + 9 + 27


def test_concatenation():
    assert str(Word("01") + "1") == "011"


@given(st.frozensets(st.integers(0, 40)))
def test_mask_roundtrip(s):
    assert mask_to_set(set_to_mask(s)) == s


def test_assignment_env_and_fits():
    a = Assignment({"x": 2}, {"X": frozenset({0, 3})})
    assert a.env() == {"x": 2, "X": 0b1001}
    assert a.fits(word_to_structure("011"))
    assert not a.fits(word_to_structure("01"))
    assert a.with_fo("y", 1).first_order == {"x": 2, "y": 1}


@given(st.text("01", max_size=6), st.text("01", max_size=6))
def test_prefix_letters_survive_concatenation(u, v):
    su, suv = word_to_structure(u), word_to_structure(u + v)
    for a in "01":
        assert {i for i in suv.predicate(a) if i <= len(u)} == su.predicate(a)


def test_enumeration_unique_and_downward_closed():
    words = [str(w) for w in enumerate_words("ab", 4)]
    assert len(words) == len(set(words))
    present = set(words)
    assert all(w[:-1] in present for w in words if w)
    assert [len(w) for w in words] == sorted(len(w) for w in words)
