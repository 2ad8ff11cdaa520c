from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from msolwords import linalg
from msolwords.errors import SingularSystem

from oracles import fraction_free_rank, gauss_rank

entries = st.one_of(st.integers(-4, 4), st.fractions(min_value=-3, max_value=3, max_denominator=4))
matrices = st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=1, max_size=6))


@settings(max_examples=300, deadline=None)
@given(matrices)
def test_rank_matches_gauss_jordan(m):
    assert linalg.rank(m) == gauss_rank(m)


@settings(max_examples=100, deadline=None)
@given(matrices)
def test_rank_matches_sympy(m):
    assert linalg.rank(m) == sympy.Matrix([[sympy.Rational(x.numerator, x.denominator)
                                            if isinstance(x, Fraction) else x for x in row]
                                           for row in m]).rank()


def test_rank_edge_cases():
    assert linalg.rank([]) == 0
    assert linalg.rank([[0, 0], [0, 0]]) == 0
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([[Fraction(1, 2), 1], [1, 2], [0, 1]]) == 2


@settings(max_examples=200, deadline=None)
@given(matrices, st.lists(entries, min_size=6, max_size=6))
def test_solve_left_reconstructs(m, coeffs):
    basis = linalg.independent_rows(m)
    if not basis:
        return
    c = [Fraction(x) for x in coeffs[:len(basis)]]
    v = [sum((c[i] * Fraction(basis[i][j]) for i in range(len(basis))), Fraction(0))
         for j in range(len(basis[0]))]
    assert linalg.solve_left(basis, v) == c
    assert linalg.in_span(m, v)


def test_solve_left_rejects_outside_span():
    with pytest.raises(SingularSystem):
        linalg.solve_left([[1, 0, 0]], [0, 1, 0])
    with pytest.raises(SingularSystem):
        linalg.solve_left([], [1])
    assert linalg.solve_left([], [0, 0]) == []


def test_independent_rows_greedy():
    rows = [[1, 1], [2, 2], [0, 1], [5, 7]]
    assert linalg.independent_rows(rows) == [[1, 1], [0, 1]]


def test_vec_mat():
    assert linalg.vec_mat([1, 2], [[1, 0], [3, 1]]) == [7, 2]


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_oracles_agree(m):
    assert fraction_free_rank(m) == gauss_rank(m) == linalg.rank(m)
