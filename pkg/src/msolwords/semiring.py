"""Commutative semirings with exact arithmetic.

Every instance is a :class:`Semiring` record holding its operations and
neutral elements.  Element representations:

============  ==========================================
``bool``      Python ``bool``
``nat``       ``int`` >= 0
``int``       ``int``
``rat``       ``fractions.Fraction``
``trop-min``  ``int`` or :data:`INF`
``trop-max``  ``int`` or :data:`NEG_INF`
``poly(..)``  :class:`Poly` with nonnegative integer coefficients
============  ==========================================
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from .errors import MissingIndeterminate, ParseError


class Inf:
    """Signed tropical infinity.  Only :data:`INF` and :data:`NEG_INF` exist."""

    __slots__ = ("sign",)

    def __init__(self, sign: int):
        self.sign = sign

    def __eq__(self, other):
        return isinstance(other, Inf) and other.sign == self.sign

    def __hash__(self):
        return hash(("Inf", self.sign))

    def __repr__(self):
        return "inf" if self.sign > 0 else "-inf"

    __str__ = __repr__


INF = Inf(1)
NEG_INF = Inf(-1)


class Poly:
    """Sparse polynomial over fixed indeterminates with coefficients in N.

    ``terms`` maps exponent tuples (one entry per generator) to positive
    integer coefficients; zero coefficients are never stored.
    """

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: tuple[str, ...], terms: Mapping[tuple[int, ...], int] = ()):
        self.gens = tuple(gens)
        clean = {}
        for exps, c in dict(terms).items():
            if len(exps) != len(self.gens):
                raise ValueError(f"exponent vector {exps} does not match {self.gens}")
            if c < 0:
                raise ValueError("coefficients must be nonnegative")
            if c:
                clean[tuple(exps)] = clean.get(tuple(exps), 0) + c
        self.terms = clean
        self._hash = None

    @classmethod
    def constant(cls, gens, c: int) -> "Poly":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def generator(cls, gens, name: str) -> "Poly":
        gens = tuple(gens)
        exps = tuple(1 if g == name else 0 for g in gens)
        if name not in gens:
            raise KeyError(name)
        return cls(gens, {exps: 1})

    def _check(self, other):
        if not isinstance(other, Poly) or other.gens != self.gens:
            raise TypeError("polynomials over different indeterminates")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.gens, out)

    def __mul__(self, other):
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.gens, out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.gens == other.gens and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            c = self.terms[exps]
            factors = []
            for g, e in zip(self.gens, exps):
                if e == 1:
                    factors.append(g)
                elif e > 1:
                    factors.append(f"{g}^{e}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)


@dataclass(frozen=True, eq=False)
class Semiring:
    """A commutative semiring: carrier predicate, operations and neutrals."""

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    contains: Callable[[Any], bool]
    parse_element: Callable[[str], Any]
    show: Callable[[Any], str] = str
    is_field: bool = False
    is_ring: bool = False
    neg: Callable[[Any], Any] | None = None
    inv: Callable[[Any], Any] | None = None
    gens: tuple[str, ...] = field(default=())

    def __repr__(self):
        return f"Semiring({self.name})"

    def sum(self, xs: Iterable) -> Any:
        acc = self.zero
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def prod(self, xs: Iterable) -> Any:
        acc = self.one
        for x in xs:
            acc = self.mul(acc, x)
        return acc

    def power(self, x, n: int):
        """``x`` multiplied with itself ``n`` times; ``power(x, 0) == one``."""
        if n < 0:
            raise ValueError("negative exponent")
        result, base = self.one, x
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    def from_nat(self, n: int):
        """Image of ``n`` under the canonical map N -> S, ``n |-> 1+...+1``."""
        if n < 0:
            raise ValueError("from_nat expects a natural number")
        result, base = self.zero, self.one
        while n:
            if n & 1:
                result = self.add(result, base)
            n >>= 1
            if n:
                base = self.add(base, base)
        return result

    def coerce(self, c):
        """Interpret a constant as an element.

        Elements of the carrier pass through (normalised); other natural
        numbers go through :meth:`from_nat`.
        """
        if self.contains(c):
            return _normalise(self, c)
        if isinstance(c, int) and not isinstance(c, bool) and c >= 0:
            return self.from_nat(c)
        if isinstance(c, bool):
            return self.one if c else self.zero
        raise TypeError(f"{c!r} is not an element of {self.name}")

    def parse(self, text: str):
        try:
            return self.parse_element(text.strip())
        except (ValueError, ZeroDivisionError, KeyError) as exc:
            raise ParseError(f"bad {self.name} literal {text!r}: {exc}") from None

    def is_zero(self, x) -> bool:
        return x == self.zero


def _normalise(S: Semiring, c):
    if S.name == "rat":
        return Fraction(c)
    return c


# ---------------------------------------------------------------------------
# instances


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _parse_bool(s):
    table = {"0": False, "1": True, "false": False, "true": True}
    if s.lower() not in table:
        raise ValueError("expected 0/1/true/false")
    return table[s.lower()]


def _parse_nat(s):
    n = int(s)
    if n < 0:
        raise ValueError("negative natural")
    return n


BOOL = Semiring(
    "bool", add=lambda a, b: a or b, mul=lambda a, b: a and b, zero=False, one=True,
    contains=lambda x: isinstance(x, bool), parse_element=_parse_bool,
    show=lambda x: "1" if x else "0",
)

NAT = Semiring(
    "nat", add=lambda a, b: a + b, mul=lambda a, b: a * b, zero=0, one=1,
    contains=lambda x: _is_int(x) and x >= 0, parse_element=_parse_nat,
)

INT = Semiring(
    "int", add=lambda a, b: a + b, mul=lambda a, b: a * b, zero=0, one=1,
    contains=_is_int, parse_element=int, is_ring=True, neg=lambda a: -a,
)


def _show_rat(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


RAT = Semiring(
    "rat", add=lambda a, b: a + b, mul=lambda a, b: a * b, zero=Fraction(0), one=Fraction(1),
    contains=lambda x: _is_int(x) or isinstance(x, Fraction), parse_element=Fraction,
    show=_show_rat, is_field=True, is_ring=True, neg=lambda a: -a, inv=lambda a: 1 / Fraction(a),
)


def _trop_add(best):
    def add(a, b):
        if isinstance(a, Inf):
            return b
        if isinstance(b, Inf):
            return a
        return best(a, b)
    return add


def _trop_mul(absorb):
    def mul(a, b):
        if isinstance(a, Inf) or isinstance(b, Inf):
            return absorb
        return a + b
    return mul


def _trop_parser(absorb):
    def parse(s):
        if s in ("inf", "+inf", "oo") and absorb is INF:
            return INF
        if s == "-inf" and absorb is NEG_INF:
            return NEG_INF
        return int(s)
    return parse


TROP_MIN = Semiring(
    "trop-min", add=_trop_add(min), mul=_trop_mul(INF), zero=INF, one=0,
    contains=lambda x: _is_int(x) or x == INF, parse_element=_trop_parser(INF),
)

TROP_MAX = Semiring(
    "trop-max", add=_trop_add(max), mul=_trop_mul(NEG_INF), zero=NEG_INF, one=0,
    contains=lambda x: _is_int(x) or x == NEG_INF, parse_element=_trop_parser(NEG_INF),
)

_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def poly_semiring(*gens: str) -> Semiring:
    """The semiring N[gens] of polynomials with natural coefficients."""
    gens = tuple(gens)
    for g in gens:
        if not _NAME.fullmatch(g):
            raise ValueError(f"bad indeterminate name {g!r}")
    if len(set(gens)) != len(gens):
        raise ValueError("duplicate indeterminates")

    def parse(s):
        total = Poly.constant(gens, 0)
        for term in s.split("+"):
            value = Poly.constant(gens, 1)
            for factor in term.split("*"):
                factor = factor.strip()
                base, _, exp = factor.partition("^")
                base = base.strip()
                k = int(exp) if exp else 1
                if base.isdigit():
                    f = Poly.constant(gens, int(base) ** k)
                else:
                    f = Poly.constant(gens, 1)
                    g = Poly.generator(gens, base)
                    for _ in range(k):
                        f = f * g
                value = value * f
            total = total + value
        return total

    return Semiring(
        f"poly({','.join(gens)})", add=lambda a, b: a + b, mul=lambda a, b: a * b,
        zero=Poly.constant(gens, 0), one=Poly.constant(gens, 1),
        contains=lambda x: isinstance(x, Poly) and x.gens == gens,
        parse_element=parse, gens=gens,
    )


_BY_NAME = {S.name: S for S in (BOOL, NAT, INT, RAT, TROP_MIN, TROP_MAX)}
_POLY_NAME = re.compile(r"poly\(\s*([^)]*)\)")


def get_semiring(name: str) -> Semiring:
    """Look up a semiring by its file/CLI name, e.g. ``rat`` or ``poly(X,Y)``."""
    name = name.strip()
    if name in _BY_NAME:
        return _BY_NAME[name]
    m = _POLY_NAME.fullmatch(name)
    if m:
        gens = [g.strip() for g in m.group(1).split(",") if g.strip()]
        return poly_semiring(*gens)
    raise ParseError(f"unknown semiring {name!r}")


def poly_substitute(p: Poly, assignment: Mapping[str, Any], target: Semiring):
    """Homomorphic image of ``p`` in ``target`` under ``assignment``.

    Coefficients are mapped through the canonical N -> target map.
    """
    values = []
    for i, g in enumerate(p.gens):
        if g in assignment:
            values.append(target.coerce(assignment[g]))
        elif any(exps[i] for exps in p.terms):
            raise MissingIndeterminate(f"no value for indeterminate {g}")
        else:
            values.append(None)
    total = target.zero
    for exps, c in p.terms.items():
        term = target.from_nat(c)
        for v, e in zip(values, exps):
            if e:
                term = target.mul(term, target.power(v, e))
        total = target.add(total, term)
    return total


# ---------------------------------------------------------------------------
# law checking


LAWS = (
    "add_associative", "mul_associative", "add_commutative", "mul_commutative",
    "distributive", "add_identity", "mul_identity", "zero_annihilates",
)


@dataclass
class LawReport:
    """Outcome per law; ``counterexamples`` maps failed laws to a witness tuple."""

    semiring: str
    checked: dict[str, bool]
    counterexamples: dict[str, tuple]

    @property
    def passed(self) -> bool:
        return all(self.checked.values())

    def lines(self):
        for law, ok in self.checked.items():
            extra = "" if ok else f"  counterexample {self.counterexamples[law]}"
            yield f"{'PASS' if ok else 'FAIL'} {law}{extra}"


def check_semiring_laws(S: Semiring, samples) -> LawReport:
    """Test every semiring axiom on all pairs/triples drawn from ``samples``."""
    samples = list(samples)
    if not samples:
        raise ValueError("samples must be nonempty")
    add, mul, zero, one = S.add, S.mul, S.zero, S.one
    tests: dict[str, tuple[int, Callable[..., bool]]] = {
        "add_associative": (3, lambda a, b, c: add(a, add(b, c)) == add(add(a, b), c)),
        "mul_associative": (3, lambda a, b, c: mul(a, mul(b, c)) == mul(mul(a, b), c)),
        "add_commutative": (2, lambda a, b: add(a, b) == add(b, a)),
        "mul_commutative": (2, lambda a, b: mul(a, b) == mul(b, a)),
        "distributive": (3, lambda a, b, c: mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
        "add_identity": (1, lambda a: add(a, zero) == a and add(zero, a) == a),
        "mul_identity": (1, lambda a: mul(a, one) == a and mul(one, a) == a),
        "zero_annihilates": (1, lambda a: mul(a, zero) == zero and mul(zero, a) == zero),
    }
    if S.is_ring and S.neg is not None:
        tests["additive_inverse"] = (1, lambda a: add(a, S.neg(a)) == zero)
    if S.is_field and S.inv is not None:
        tests["multiplicative_inverse"] = (1, lambda a: a == zero or mul(a, S.inv(a)) == one)

    checked, witnesses = {}, {}
    for law, (arity, pred) in tests.items():
        checked[law] = True
        for args in itertools.product(samples, repeat=arity):
            try:
                ok = pred(*args)
            except (ArithmeticError, TypeError):
                ok = False
            if not ok:
                checked[law] = False
                witnesses[law] = args
                break
    return LawReport(S.name, checked, witnesses)


SAMPLES = {
    "bool": [False, True],
    "nat": [0, 1, 2, 7],
    "int": [0, 1, -1, 3, -5],
    "rat": [Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-3)],
    "trop-min": [INF, 0, 2, 5, -1],
    "trop-max": [NEG_INF, 0, 2, 5, -1],
}
