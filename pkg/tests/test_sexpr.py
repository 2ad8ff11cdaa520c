import pytest
from hypothesis import given
from hypothesis import strategies as st

from msolwords import sexpr
from msolwords.errors import ParseError

atoms = st.from_regex(r"[a-z0-9/_\-]{1,5}", fullmatch=True)
exprs = st.recursive(atoms, lambda inner: st.lists(inner, max_size=4), max_leaves=20)


@given(exprs)
def test_write_read_roundtrip(e):
    assert sexpr.read(sexpr.write(e)) == e


def test_comments_and_whitespace():
    assert sexpr.read("; header\n(and\n  (letter 1 x) ; trailing\n  true)") == \
        ["and", ["letter", "1", "x"], "true"]


@pytest.mark.parametrize("bad", ["", "(a b", "a)", "(a) (b)", ")"])
def test_errors(bad):
    with pytest.raises(ParseError):
        sexpr.read(bad)
