"""Weighted automata: evaluation, quotients, compilation to terms, Hankel analysis.

An automaton of size ``r`` is a linear representation ``(alpha, mu, gamma)``;
it maps ``w = a_1 ... a_n`` to ``alpha . mu[a_1] ... mu[a_n] . gamma^T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from . import linalg, mso
from .errors import FieldRequired, ParseError, RankNotSaturated, SingularSystem, UnknownLetter
from .msoleval import Product, SetSum, StdMonomial, Term
from .semiring import RAT, Semiring, get_semiring
from .words import DEFAULT_ALPHABET, enumerate_words


@dataclass(frozen=True)
class WeightedAutomaton:
    S: Semiring
    alphabet: str
    alpha: tuple
    gamma: tuple
    mu: Mapping[str, tuple]  # letter -> r x r matrix as a tuple of row tuples

    def __post_init__(self):
        r = len(self.alpha)
        if r == 0:
            raise ValueError("an automaton needs at least one state")
        if len(self.gamma) != r:
            raise ValueError("alpha and gamma differ in length")
        if set(self.mu) != set(self.alphabet):
            raise ValueError("need exactly one matrix per letter")
        for a, m in self.mu.items():
            if len(m) != r or any(len(row) != r for row in m):
                raise ValueError(f"matrix for {a!r} is not {r}x{r}")

    @property
    def size(self) -> int:
        return len(self.alpha)

    @classmethod
    def build(cls, S: Semiring, alphabet: str, alpha, gamma, mu) -> "WeightedAutomaton":
        """Coerce all entries into ``S`` and freeze the containers."""
        c = S.coerce
        if set(mu) != set(alphabet):
            raise ValueError("need exactly one matrix per letter")
        return cls(S, alphabet, tuple(c(x) for x in alpha), tuple(c(x) for x in gamma),
                   {a: tuple(tuple(c(x) for x in row) for row in mu[a]) for a in alphabet})


def _vec_mat(S: Semiring, v, m):
    r = len(v)
    return tuple(S.sum(S.mul(v[i], m[i][j]) for i in range(r)) for j in range(r))


def _dot(S: Semiring, u, v):
    return S.sum(S.mul(x, y) for x, y in zip(u, v))


def state_vector(A: WeightedAutomaton, w) -> tuple:
    """``alpha . mu[w]``."""
    v = A.alpha
    for ch in str(w):
        if ch not in A.mu:
            raise UnknownLetter(f"letter {ch!r} not in alphabet {A.alphabet!r}")
        v = _vec_mat(A.S, v, A.mu[ch])
    return v


def run(A: WeightedAutomaton, w):
    return _dot(A.S, state_vector(A, w), A.gamma)


def left_quotient(A: WeightedAutomaton, w) -> WeightedAutomaton:
    """Automaton for ``u |-> f_A(w u)``."""
    return WeightedAutomaton(A.S, A.alphabet, state_vector(A, w), A.gamma, A.mu)


def automaton_to_msoleval(A: WeightedAutomaton, prefix: str = "U") -> Term:
    """A term computing ``f_A``.

    A run is encoded as a partition ``U_1..U_r`` of ``{0} u [n]`` (position
    ``k`` is in ``U_i`` when the run is in state ``i`` after reading ``k``
    letters).  The weight of the run is the product of one monomial per
    initial state, per transition ``(i, j, a)``, and per final state.
    """
    r = A.size
    Us = tuple(f"{prefix}{i + 1}" for i in range(r))
    v = "v"
    factors = []
    for i in range(r):
        factors.append(StdMonomial(A.alpha[i], v, mso.And((mso.First(v), mso.In(v, Us[i])))))
    for i in range(r):
        for j in range(r):
            for a in A.alphabet:
                guard = mso.And((mso.Pos(v), mso.Letter(a, v), mso.In(v, Us[j]), mso.PredIn(v, Us[i])))
                factors.append(StdMonomial(A.mu[a][i][j], v, guard))
    for i in range(r):
        factors.append(StdMonomial(A.gamma[i], v, mso.And((mso.Last(v), mso.In(v, Us[i])))))
    return SetSum(Us, mso.Partition(Us), Product(tuple(factors)))


# ---------------------------------------------------------------------------
# Hankel matrices

WordFunction = Callable[[str], object]


def _require_field(S: Semiring | None, what: str):
    if S is not None and not S.is_field:
        raise FieldRequired(f"{what} needs a field; {S.name} is not one")


@dataclass(frozen=True)
class HankelBlock:
    prefixes: tuple
    suffixes: tuple
    entries: tuple

    def entry(self, u: str, v: str):
        return self.entries[self.prefixes.index(u)][self.suffixes.index(v)]


def hankel_block(f: WordFunction, prefixes, suffixes, S: Semiring | None = None) -> HankelBlock:
    """Block with entry ``(u, v) = f(u v)``."""
    _require_field(S, "a Hankel block")
    prefixes = tuple(str(u) for u in prefixes)
    suffixes = tuple(str(v) for v in suffixes)
    cache: dict = {}

    def value(word):
        if word not in cache:
            cache[word] = f(word)
        return cache[word]
    rows = tuple(tuple(value(u + v) for v in suffixes) for u in prefixes)
    return HankelBlock(prefixes, suffixes, rows)


def hankel_rank(H: HankelBlock) -> int:
    return linalg.rank(H.entries)


def words_upto(alphabet: str, n: int) -> list:
    return [str(w) for w in enumerate_words(alphabet, n)]


def truncated_hankel(f: WordFunction, length: int, alphabet: str = DEFAULT_ALPHABET,
                     S: Semiring | None = None) -> HankelBlock:
    """All words of length ``<= length`` as both prefixes and suffixes."""
    ws = words_upto(alphabet, length)
    return hankel_block(f, ws, ws, S)


def hankel_ranks(f: WordFunction, max_len: int, alphabet: str = DEFAULT_ALPHABET,
                 S: Semiring | None = None) -> list:
    return [hankel_rank(truncated_hankel(f, n, alphabet, S)) for n in range(max_len + 1)]


def learn_automaton(f: WordFunction, basis_len: int, alphabet: str = DEFAULT_ALPHABET,
                    S: Semiring = RAT, verify_len: int | None = None) -> WeightedAutomaton:
    """Synthesise an automaton from the Hankel matrix of ``f``.

    Requires the rank of the block over words ``<= basis_len`` to equal the
    rank over words ``<= basis_len + 1``.  Rows are chosen breadth first
    from a prefix-closed set; each shifted row ``u a`` is expressed in the
    chosen rows to give ``mu[a]``.  The result is checked against ``f`` on
    all words of length ``<= verify_len`` (default ``basis_len + 2``).
    """
    _require_field(S, "learning")
    small = hankel_rank(truncated_hankel(f, basis_len, alphabet, S))
    large = hankel_rank(truncated_hankel(f, basis_len + 1, alphabet, S))
    if small != large:
        raise RankNotSaturated(
            f"Hankel rank {small} at length {basis_len} but {large} at length {basis_len + 1}")
    suffixes = words_upto(alphabet, basis_len + 1)
    cache: dict = {}

    def value(word):
        if word not in cache:
            cache[word] = Fraction(f(word))
        return cache[word]

    def row(u):
        return [value(u + v) for v in suffixes]

    basis, rows, queue = [], [], [""]
    while queue:
        u = queue.pop(0)
        candidate = row(u)
        if linalg.rank(rows + [candidate]) > len(rows):
            basis.append(u)
            rows.append(candidate)
            if len(u) < basis_len:
                queue.extend(u + a for a in alphabet)
    if len(basis) != large:
        raise SingularSystem(
            f"prefix-closed rows reach rank {len(basis)}, block rank is {large}")
    if not basis:
        zero = S.zero
        return WeightedAutomaton.build(S, alphabet, [zero], [zero], {a: [[zero]] for a in alphabet})
    r = len(basis)
    mu = {}
    for a in alphabet:
        mu[a] = [linalg.solve_left(rows, row(u + a)) for u in basis]
    alpha = linalg.solve_left(rows, row(""))
    gamma = [value(u) for u in basis]
    A = WeightedAutomaton.build(S, alphabet, alpha, gamma, mu)
    limit = basis_len + 2 if verify_len is None else verify_len
    for w in words_upto(alphabet, limit):
        if run(A, w) != value(w):
            raise SingularSystem(
                f"learned automaton of size {r} disagrees with the function on {w!r}")
    return A


@dataclass
class ClosureReport:
    stable: bool
    dimension: int
    generators: list  # words whose state vectors span the closure
    checked: int
    outside: list = field(default_factory=list)


def quotient_closure_check(A: WeightedAutomaton, depth: int) -> ClosureReport:
    """Span of ``{alpha . mu[w]}`` and its closure under every letter.

    Generators are found breadth first, extending only words that enlarged
    the span; every vector of a word of length ``<= depth`` is then checked
    to lie in that span.
    """
    _require_field(A.S, "the closure check")
    generators, rows, queue = [], [], [""]
    while queue:
        u = queue.pop(0)
        v = list(state_vector(A, u))
        if linalg.rank(rows + [v]) > len(rows):
            generators.append(u)
            rows.append(v)
            queue.extend(u + a for a in A.alphabet)
    report = ClosureReport(True, len(rows), generators, 0)
    for w in words_upto(A.alphabet, depth):
        report.checked += 1
        try:
            linalg.solve_left(rows, state_vector(A, w))
        except SingularSystem:
            report.stable = False
            report.outside.append(w)
    return report


# ---------------------------------------------------------------------------
# stock word functions


def count_ones_fn(w) -> int:
    return str(w).count("1")


def sq_fn(w) -> int:
    return 2 ** (len(str(w)) ** 2)


def const_fn(c) -> WordFunction:
    return lambda w: c


def count_ones_automaton(S: Semiring = RAT) -> WeightedAutomaton:
    """Two states: ``alpha = (1, 0)``, ``gamma = (0, 1)``, ``mu[1]`` adds the upper-right 1."""
    one, zero = S.one, S.zero
    return WeightedAutomaton.build(S, "01", [one, zero], [zero, one], {
        "0": [[one, zero], [zero, one]],
        "1": [[one, one], [zero, one]],
    })


# ---------------------------------------------------------------------------
# text format


def write_automaton(A: WeightedAutomaton) -> str:
    show = A.S.show
    lines = [
        "formalism: automaton",
        f"semiring: {A.S.name}",
        f"alphabet: {A.alphabet}",
        f"size: {A.size}",
        "alpha: " + " ".join(show(x) for x in A.alpha),
        "gamma: " + " ".join(show(x) for x in A.gamma),
    ]
    for a in A.alphabet:
        lines.append(f"mu {a}:")
        lines.extend("  " + " ".join(show(x) for x in row) for row in A.mu[a])
    return "\n".join(lines) + "\n"


def read_automaton(text: str, S: Semiring | None = None) -> WeightedAutomaton:
    """Parse the text format; ``S`` overrides the ``semiring:`` header."""
    header: dict = {}
    mu: dict = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("mu ") and line.endswith(":"):
            current = line[3:-1].strip()
            if len(current) != 1:
                raise ParseError(f"line {lineno}: bad matrix header {raw!r}")
            mu[current] = []
            continue
        key, sep, rest = line.partition(":")
        if sep and key.strip() in ("formalism", "semiring", "alphabet", "size", "alpha", "gamma"):
            header[key.strip()] = rest.strip()
            current = None
            continue
        if current is None:
            raise ParseError(f"line {lineno}: unexpected {raw!r}")
        mu[current].append(line.split())
    for key in ("alphabet", "size", "alpha", "gamma"):
        if key not in header:
            raise ParseError(f"missing '{key}:' header")
    if header.get("formalism", "automaton") != "automaton":
        raise ParseError(f"not an automaton file (formalism: {header['formalism']})")
    if S is None:
        S = get_semiring(header.get("semiring", "rat"))
    try:
        r = int(header["size"])
    except ValueError:
        raise ParseError(f"bad size {header['size']!r}") from None
    alphabet = header["alphabet"].replace(" ", "")
    alpha = [S.parse(x) for x in header["alpha"].split()]
    gamma = [S.parse(x) for x in header["gamma"].split()]
    matrices = {a: [[S.parse(x) for x in row] for row in mu.get(a, [])] for a in alphabet}
    if len(alpha) != r or len(gamma) != r:
        raise ParseError(f"alpha/gamma must have {r} entries")
    for a, m in matrices.items():
        if len(m) != r or any(len(row) != r for row in m):
            raise ParseError(f"matrix for {a!r} must be {r}x{r}")
    extra = set(mu) - set(alphabet)
    if extra:
        raise ParseError(f"matrix for letter(s) outside the alphabet: {''.join(sorted(extra))}")
    return WeightedAutomaton.build(S, alphabet, alpha, gamma, matrices)
