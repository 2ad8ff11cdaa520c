"""MSOLEVAL terms: MSO-guarded monomials, products and set-indexed sums.

Term forms
----------
``StdMonomial(base, v, guard)``
    ``base`` raised to the number of elements ``v`` satisfying ``guard``.
``Product(factors)``
    pointwise product.
``SetSum(vars, guard, body)``
    sum of ``body`` over all tuples of subsets satisfying ``guard``.
``FoSum(v, guard, body)``
    sum over single elements; equivalent to a set sum over singletons.
``Const(c)``
    a constant.  ``True``/``False`` stand for the semiring's one/zero; other
    constants are coerced with :meth:`Semiring.coerce`.

Monomial bases are constants or :class:`Ind` indeterminates.  A base equal
to zero is allowed and evaluates to one when no element satisfies the guard.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from . import mso, sexpr
from .errors import MissingIndeterminate, ParseError, UnboundVariable
from .semiring import INF, NEG_INF, Poly, Semiring
from .words import WordStructure, as_env, word_to_structure


class Term:
    __slots__ = ()

    def __str__(self):
        return to_sexpr(self)


@dataclass(frozen=True)
class Ind:
    """An indeterminate used as a monomial base."""
    name: str


@dataclass(frozen=True)
class Const(Term):
    value: Any


@dataclass(frozen=True)
class StdMonomial(Term):
    base: Any
    var: str
    guard: mso.Formula


@dataclass(frozen=True)
class Product(Term):
    factors: tuple


@dataclass(frozen=True)
class SetSum(Term):
    vars: tuple
    guard: mso.Formula
    body: Term


@dataclass(frozen=True)
class FoSum(Term):
    var: str
    guard: mso.Formula
    body: Term


ONE = Const(True)
ZERO = Const(False)


# ---------------------------------------------------------------------------
# structure


def subterms(t: Term):
    yield t
    if isinstance(t, Product):
        for f in t.factors:
            yield from subterms(f)
    elif isinstance(t, (SetSum, FoSum)):
        yield from subterms(t.body)


def guards(t: Term):
    for u in subterms(t):
        if isinstance(u, (StdMonomial, SetSum, FoSum)):
            yield u.guard


def free_vars(t: Term) -> tuple[frozenset, frozenset]:
    fo, so = set(), set()
    _free(t, frozenset(), fo, so)
    return frozenset(fo), frozenset(so)


def _free(t, bound, fo, so):
    def add_formula(phi, b):
        f, s = mso.free_vars(phi)
        fo.update(f - b)
        so.update(s - b)

    if isinstance(t, Const):
        return
    if isinstance(t, StdMonomial):
        add_formula(t.guard, bound | {t.var})
    elif isinstance(t, Product):
        for f in t.factors:
            _free(f, bound, fo, so)
    elif isinstance(t, SetSum):
        inner = bound | set(t.vars)
        add_formula(t.guard, inner)
        _free(t.body, inner, fo, so)
    elif isinstance(t, FoSum):
        inner = bound | {t.var}
        add_formula(t.guard, inner)
        _free(t.body, inner, fo, so)
    else:
        raise TypeError(f"not a term: {t!r}")


def all_vars(t: Term) -> set:
    out = set()
    for u in subterms(t):
        if isinstance(u, (StdMonomial, FoSum)):
            out.add(u.var)
        elif isinstance(u, SetSum):
            out.update(u.vars)
        if isinstance(u, (StdMonomial, SetSum, FoSum)):
            out |= mso.all_vars(u.guard)
    return out


def indeterminates(t: Term) -> set:
    return {u.base.name for u in subterms(t)
            if isinstance(u, StdMonomial) and isinstance(u.base, Ind)}


def quantifier_rank(t: Term) -> int:
    """Largest quantifier rank among the guards of ``t``."""
    return max((mso.quantifier_rank(g) for g in guards(t)), default=0)


def fresh_name(avoid, base: str) -> str:
    name, k = base, 0
    while name in avoid:
        k += 1
        name = f"{base}{k}"
    return name


# ---------------------------------------------------------------------------
# evaluation


def _base_value(base, S: Semiring, subst):
    if isinstance(base, Ind):
        if subst is not None and base.name in subst:
            return S.coerce(subst[base.name])
        if base.name in S.gens:
            return Poly.generator(S.gens, base.name)
        raise MissingIndeterminate(f"no value for indeterminate {base.name}")
    return S.coerce(base)


def compile_term(t: Term, S: Semiring, subst=None):
    """Compile to ``f(s, env) -> element``; see :func:`mso.compile_formula`."""
    if isinstance(t, Const):
        value = S.coerce(t.value)
        return lambda s, env: value

    if isinstance(t, StdMonomial):
        base = _base_value(t.base, S, subst)
        guard = mso.compile_formula(t.guard)
        v = t.var
        if base == S.one:
            return lambda s, env: base
        if base == S.zero:
            zero, one = S.zero, S.one

            def vanishing(s, env):
                old = env.get(v, _MISSING)
                result = one
                for e in range(s.n + 1):
                    env[v] = e
                    if guard(s, env):
                        result = zero
                        break
                _restore(env, v, old)
                return result
            return vanishing

        powers = [S.one]

        def monomial(s, env):
            old = env.get(v, _MISSING)
            count = 0
            for e in range(s.n + 1):
                env[v] = e
                if guard(s, env):
                    count += 1
            _restore(env, v, old)
            while len(powers) <= count:
                powers.append(S.mul(powers[-1], base))
            return powers[count]
        return monomial

    if isinstance(t, Product):
        fs = [compile_term(f, S, subst) for f in t.factors]
        zero, one, mul = S.zero, S.one, S.mul

        def product(s, env):
            acc = one
            for f in fs:
                x = f(s, env)
                if x == zero:
                    return zero
                acc = mul(acc, x)
            return acc
        return product

    if isinstance(t, FoSum):
        guard = mso.compile_formula(t.guard)
        body = compile_term(t.body, S, subst)
        v, add, zero = t.var, S.add, S.zero

        def fosum(s, env):
            old = env.get(v, _MISSING)
            acc = zero
            for e in range(s.n + 1):
                env[v] = e
                if guard(s, env):
                    acc = add(acc, body(s, env))
            _restore(env, v, old)
            return acc
        return fosum

    if isinstance(t, SetSum):
        guard = mso.compile_formula(t.guard)
        body = compile_term(t.body, S, subst)
        candidates = _plan(t.vars, t.guard)
        names, add, zero = t.vars, S.add, S.zero

        def setsum(s, env):
            saved = [env.get(R, _MISSING) for R in names]
            acc = zero
            for masks in candidates(s, env):
                for R, m in zip(names, masks):
                    env[R] = m
                if guard(s, env):
                    acc = add(acc, body(s, env))
            for R, old in zip(names, saved):
                _restore(env, R, old)
            return acc
        return setsum

    raise TypeError(f"not a term: {t!r}")


_MISSING = object()


def _restore(env, name, old):
    if old is _MISSING:
        env.pop(name, None)
    else:
        env[name] = old


def _conjuncts(phi):
    if isinstance(phi, mso.And):
        for p in phi.parts:
            yield from _conjuncts(p)
    else:
        yield phi


def _plan(names, guard):
    """Candidate generator for the bound sets of a set sum.

    The candidates always include every satisfying tuple; the full guard is
    still evaluated on each.  Top-level conjuncts that pin a bound set
    (``Empty``, ``Full``, ``PosSet``, a disjunction of ``Empty``/``Full``,
    or a ``Partition`` of exactly the bound sets) shrink the search.
    """
    names = tuple(names)
    partition = None
    pins: dict = {}
    for c in _conjuncts(guard):
        if isinstance(c, mso.Partition) and sorted(c.set_vars) == sorted(names) \
                and len(set(c.set_vars)) == len(names):
            partition = c.set_vars
        elif isinstance(c, (mso.Empty, mso.Full, mso.PosSet)) and c.set_var in names:
            pins.setdefault(c.set_var, []).append(type(c))
        elif isinstance(c, mso.Or) and all(isinstance(p, (mso.Empty, mso.Full)) for p in c.parts) \
                and len({p.set_var for p in c.parts}) == 1 and c.parts[0].set_var in names:
            pins.setdefault(c.parts[0].set_var, []).append(tuple(type(p) for p in c.parts))

    if partition is not None:
        order = [partition.index(R) for R in names]
        r = len(partition)

        def by_partition(s, env):
            size = s.n + 1
            for blocks in itertools.product(range(r), repeat=size):
                masks = [0] * r
                for e, b in enumerate(blocks):
                    masks[b] |= 1 << e
                yield tuple(masks[i] for i in order)
        return by_partition

    def options(R, s):
        full = (1 << (s.n + 1)) - 1
        result = None
        for pin in pins.get(R, ()):
            kinds = pin if isinstance(pin, tuple) else (pin,)
            if kinds == (mso.PosSet,):
                continue
            allowed = {0 if k is mso.Empty else full for k in kinds}
            result = allowed if result is None else result & allowed
        if result is not None:
            return sorted(result)
        if mso.PosSet in pins.get(R, ()):
            return range(0, full + 1, 2)
        return range(full + 1)

    def by_product(s, env):
        return itertools.product(*(options(R, s) for R in names))
    return by_product


def eval_term(t: Term, w, sigma=None, S: Semiring | None = None, subst=None):
    """Value of ``t`` on word ``w`` under assignment ``sigma`` in semiring ``S``."""
    if S is None:
        raise TypeError("eval_term needs a semiring")
    s = w if isinstance(w, WordStructure) else word_to_structure(w)
    env = as_env(sigma)
    fo, so = free_vars(t)
    missing = sorted(v for v in fo | so if v not in env)
    if missing:
        raise UnboundVariable(f"unbound variable(s) {', '.join(missing)}")
    return compile_term(t, S, subst)(s, env)


# ---------------------------------------------------------------------------
# constructions


def tv_term(phi: mso.Formula) -> Term:
    """Truth value of ``phi`` as a term: sum of one over ``{U : U = A and phi}``."""
    U = fresh_name(mso.all_vars(phi), "U")
    return SetSum((U,), mso.And((mso.Full(U), phi)), ONE)


def const_term(c, *, as_monomial: bool = False) -> Term:
    """A term with constant value ``c``.

    With ``as_monomial=True`` the constant is written in pure monomial form:
    ``c`` raised to the number of least elements (always exactly one), or an
    empty set sum when ``c`` is the zero marker ``False``.
    """
    if not as_monomial:
        return Const(c)
    if c is False:
        return SetSum(("U",), mso.FALSE, ONE)
    return StdMonomial(c, "v", mso.First("v"))


def indet_term(name: str) -> Term:
    return StdMonomial(Ind(name), "v", mso.First("v"))


def term_product(*terms: Term) -> Term:
    factors = []
    for t in terms:
        factors.extend(t.factors if isinstance(t, Product) else (t,))
    return Product(tuple(factors))


def conditional(psi: mso.Formula, t: Term, avoid=frozenset()) -> Term:
    """A term equal to ``t`` where ``psi`` holds and to one elsewhere.

    ``psi`` must not mention variables bound inside ``t``.
    """
    if isinstance(t, Const):
        v = fresh_name(set(avoid) | mso.all_vars(psi), "_c")
        return StdMonomial(t.value, v, mso.And((psi, mso.First(v))))
    if isinstance(t, StdMonomial):
        return StdMonomial(t.base, t.var, mso.And((t.guard, psi)))
    if isinstance(t, Product):
        return Product(tuple(conditional(psi, f, avoid) for f in t.factors))
    if isinstance(t, SetSum):
        off = mso.And((mso.Not(psi), *(mso.Empty(R) for R in t.vars)))
        guard = mso.Or((mso.And((psi, t.guard)), off))
        return SetSum(t.vars, guard, conditional(psi, t.body, avoid))
    if isinstance(t, FoSum):
        off = mso.And((mso.Not(psi), mso.First(t.var)))
        guard = mso.Or((mso.And((psi, t.guard)), off))
        return FoSum(t.var, guard, conditional(psi, t.body, avoid))
    raise TypeError(f"not a term: {t!r}")


def term_sum(*terms: Term) -> Term:
    """Pointwise sum written with a single set sum over a selector set.

    For two summands: sum over ``U`` with ``U`` empty or full, the summand
    chosen by ``U`` made conditional on that choice.  More summands nest.
    """
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    left, right = terms[0], term_sum(*terms[1:])
    avoid = all_vars(left) | all_vars(right)
    U = fresh_name(avoid, "_S")
    return SetSum((U,), mso.Or((mso.Empty(U), mso.Full(U))),
                  Product((conditional(mso.Empty(U), left, avoid | {U}),
                           conditional(mso.Full(U), right, avoid | {U}))))


# ---------------------------------------------------------------------------
# concrete syntax


def literal_to_str(c, S: Semiring | None = None) -> str:
    if c is True:
        return "true"
    if c is False:
        return "false"
    if S is not None and S.contains(c):
        text = S.show(c)
    elif isinstance(c, Fraction):
        text = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    else:
        text = str(c)
    return text.replace(" ", "")


def parse_literal(tok: str, S: Semiring | None = None):
    if tok in ("true", "false"):
        return tok == "true"
    if S is not None:
        return S.parse(tok)
    if tok in ("inf", "+inf"):
        return INF
    if tok == "-inf":
        return NEG_INF
    try:
        if "/" in tok:
            return Fraction(tok)
        return int(tok)
    except ValueError:
        raise ParseError(f"bad constant {tok!r}") from None


def to_sexpr(t: Term, S: Semiring | None = None) -> str:
    return sexpr.write(_to_list(t, S))


def _to_list(t, S):
    if isinstance(t, Const):
        return ["const", literal_to_str(t.value, S)]
    if isinstance(t, StdMonomial):
        base = ["ind", t.base.name] if isinstance(t.base, Ind) else literal_to_str(t.base, S)
        return ["mon", base, t.var, mso._to_list(t.guard)]
    if isinstance(t, Product):
        return ["prod", *(_to_list(f, S) for f in t.factors)]
    if isinstance(t, SetSum):
        return ["sumset", list(t.vars), mso._to_list(t.guard), _to_list(t.body, S)]
    if isinstance(t, FoSum):
        return ["sumel", t.var, mso._to_list(t.guard), _to_list(t.body, S)]
    raise TypeError(f"not a term: {t!r}")


def parse_term(text: str, S: Semiring | None = None) -> Term:
    t = _from_list(sexpr.read(text), S, frozenset())
    for g in guards(t):
        mso.check_sorts(g)
    return t


def _from_list(e, S, bound):
    if not isinstance(e, list) or not e or not isinstance(e[0], str):
        raise ParseError(f"expected a term, got {sexpr.write(e)!r}")
    head, args = e[0], e[1:]

    def binder(name):
        name = mso._name(name)
        if name in bound:
            raise ParseError(f"variable {name} rebinds an enclosing binder")
        return name

    if head == "const":
        if len(args) != 1 or not isinstance(args[0], str):
            raise ParseError("const expects one literal")
        return Const(parse_literal(args[0], S))
    if head == "mon":
        if len(args) != 3:
            raise ParseError("mon expects base, variable, guard")
        base = args[0]
        if isinstance(base, list):
            if len(base) != 2 or base[0] != "ind":
                raise ParseError("monomial base must be a literal or (ind X)")
            base = Ind(mso._name(base[1]))
        else:
            base = parse_literal(base, S)
        v = binder(args[1])
        return StdMonomial(base, v, mso.from_list(args[2], bound | {v}))
    if head == "prod":
        return Product(tuple(_from_list(a, S, bound) for a in args))
    if head == "sumset":
        if len(args) != 3 or not isinstance(args[0], list):
            raise ParseError("sumset expects (vars) guard body")
        names = tuple(binder(a) for a in args[0])
        if len(set(names)) != len(names):
            raise ParseError("duplicate set variables in sumset")
        inner = bound | set(names)
        return SetSum(names, mso.from_list(args[1], inner), _from_list(args[2], S, inner))
    if head == "sumel":
        if len(args) != 3:
            raise ParseError("sumel expects variable guard body")
        v = binder(args[0])
        inner = bound | {v}
        return FoSum(v, mso.from_list(args[1], inner), _from_list(args[2], S, inner))
    raise ParseError(f"unknown term operator '{head}'")


# ---------------------------------------------------------------------------
# worked examples


def count_ones() -> Term:
    """Number of positions carrying 1."""
    return FoSum("i", mso.Letter("1", "i"), Const(1))


def x_to_count_ones(indeterminate: str = "X") -> Term:
    return StdMonomial(Ind(indeterminate), "i", mso.Letter("1", "i"))


def block_count() -> Term:
    """Number of maximal blocks of 1's, summing over the blocks themselves."""
    return SetSum(("B",), mso.block1("B"), Const(1))


def block_count_by_first() -> Term:
    """Number of blocks of 1's, summing over their first positions."""
    return FoSum("v", mso.first_in_block("v"), Const(1))


def extreme_block_size() -> Term:
    """Size of the largest (trop-max) or smallest (trop-min) block of 1's.

    The size of a block is the tropical product of 1 over its members, i.e.
    integer addition; the sum over blocks is max or min.
    """
    return SetSum(("B",), mso.block1("B"), StdMonomial(1, "v", mso.In("v", "B")))
