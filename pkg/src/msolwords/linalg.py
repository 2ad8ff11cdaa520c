"""Exact linear algebra over the rationals.

Matrices are lists of rows.  Rank uses fraction-free (Bareiss) elimination
after clearing denominators row by row, so all intermediate values are
integers.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import SingularSystem


def _integer_rows(rows):
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * d) for x in row])
    return out


def rank(rows) -> int:
    """Rank of a matrix with rational entries."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r, prev = 0, 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        for i in range(r + 1, n_rows):
            a = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, n_cols):
                row_i[j] = (p * row_i[j] - a * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def solve_left(basis, v):
    """Coefficients ``c`` with ``sum_i c[i] * basis[i] == v``.

    ``basis`` must be linearly independent.  Raises :class:`SingularSystem`
    if ``v`` is not in their span.
    """
    k = len(basis)
    if k == 0:
        if any(Fraction(x) != 0 for x in v):
            raise SingularSystem("vector is not in the span of the empty basis")
        return []
    n = len(v)
    # columns of the augmented system: unknowns c_0..c_{k-1}, one equation per coordinate
    a = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    pivots, r = [], 0
    for c in range(k):
        pivot = next((i for i in range(r, n) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if any(a[i][k] != 0 for i in range(r, n)):
        raise SingularSystem("vector is not in the row span")
    coeffs = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        coeffs[c] = a[i][k]
    return coeffs


def in_span(rows, v) -> bool:
    try:
        solve_left(independent_rows(rows), v)
    except SingularSystem:
        return False
    return True


def independent_rows(rows):
    """Greedy maximal linearly independent subsequence of ``rows``."""
    chosen, r = [], 0
    for row in rows:
        if rank(chosen + [row]) > r:
            chosen.append(row)
            r += 1
    return chosen


def vec_mat(v, m):
    if not m:
        return []
    return [sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(m[0]))]
