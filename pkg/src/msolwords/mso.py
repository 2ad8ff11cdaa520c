"""Classical monadic second-order logic on word structures.

Quantifiers range over the whole universe ``{0} u [n]`` (first order) and
its subsets (set variables).  Besides the primitive connectives there are a
few *derived* formulas (``Pos``, ``First``, ``Last``, ``Succ``, ``Empty``,
``Full``, ``PosSet``, ``Partition``).  Each has a direct semantics used by
the evaluator and an :meth:`expand` method giving its definition in
primitive MSO; the two are checked against each other in the test suite.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Callable

from . import sexpr
from .errors import ParseError, UnboundVariable
from .words import as_env, word_to_structure, WordStructure


class Formula:
    __slots__ = ()

    def __and__(self, other):
        return And((self, other))

    def __or__(self, other):
        return Or((self, other))

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return to_sexpr(self)


# -- atoms ------------------------------------------------------------------


@dataclass(frozen=True)
class Letter(Formula):
    """``P_a(x)``: position ``x`` carries letter ``a``."""
    letter: str
    var: str


@dataclass(frozen=True)
class Leq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str


@dataclass(frozen=True)
class In(Formula):
    var: str
    set_var: str


@dataclass(frozen=True)
class Truth(Formula):
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)

# -- connectives and quantifiers ---------------------------------------------


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsSet(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallSet(Formula):
    var: str
    body: Formula


# -- derived formulas ----------------------------------------------------------


def _fresh(avoid, base="_y"):
    name, k = base, 0
    while name in avoid:
        k += 1
        name = f"{base}{k}"
    return name


class Derived(Formula):
    __slots__ = ()

    def expand(self) -> Formula:
        raise NotImplementedError


@dataclass(frozen=True)
class Pos(Derived):
    """``x`` is a letter position, i.e. not the least element 0."""
    var: str

    def expand(self):
        return Not(First(self.var).expand())


@dataclass(frozen=True)
class First(Derived):
    var: str

    def expand(self):
        y = _fresh({self.var})
        return Forall(y, Leq(self.var, y))


@dataclass(frozen=True)
class Last(Derived):
    var: str

    def expand(self):
        y = _fresh({self.var})
        return Forall(y, Leq(y, self.var))


@dataclass(frozen=True)
class Succ(Derived):
    """``right`` is the immediate successor of ``left``."""
    left: str
    right: str

    def expand(self):
        x, y = self.left, self.right
        z = _fresh({x, y}, "_z")
        between = And((Leq(x, z), Leq(z, y)))
        return And((Leq(x, y), Not(Eq(x, y)),
                    Forall(z, Implies(between, Or((Eq(z, x), Eq(z, y)))))))


@dataclass(frozen=True)
class Empty(Derived):
    set_var: str

    def expand(self):
        y = _fresh({self.set_var})
        return Forall(y, Not(In(y, self.set_var)))


@dataclass(frozen=True)
class Full(Derived):
    """``X = A``: the set contains the whole universe."""
    set_var: str

    def expand(self):
        y = _fresh({self.set_var})
        return Forall(y, In(y, self.set_var))


@dataclass(frozen=True)
class PosSet(Derived):
    """The set contains letter positions only (not the element 0)."""
    set_var: str

    def expand(self):
        y = _fresh({self.set_var})
        return Forall(y, Implies(First(y).expand(), Not(In(y, self.set_var))))


@dataclass(frozen=True)
class Partition(Derived):
    """The sets are pairwise disjoint and cover the universe (blocks may be empty)."""
    set_vars: tuple

    def expand(self):
        y = _fresh(set(self.set_vars))
        Us = self.set_vars
        cover = Or(tuple(In(y, U) for U in Us)) if len(Us) != 1 else In(y, Us[0])
        disjoint = [Not(And((In(y, Us[i]), In(y, Us[j]))))
                    for i in range(len(Us)) for j in range(i + 1, len(Us))]
        return Forall(y, And((cover, *disjoint)) if disjoint else cover)


@dataclass(frozen=True)
class PredIn(Derived):
    """``var`` has an immediate predecessor and it lies in ``set_var``."""
    var: str
    set_var: str

    def expand(self):
        u = _fresh({self.var, self.set_var}, "_u")
        return Exists(u, And((Succ(u, self.var).expand(), In(u, self.set_var))))


ATOMS = (Letter, Leq, Eq, In, Truth)
FO_QUANTIFIERS = (Exists, Forall)
SO_QUANTIFIERS = (ExistsSet, ForallSet)


# ---------------------------------------------------------------------------
# structural helpers


def expand_all(phi: Formula) -> Formula:
    """Replace every derived formula by its primitive definition."""
    if isinstance(phi, Derived):
        return expand_all(phi.expand())
    if isinstance(phi, Not):
        return Not(expand_all(phi.body))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(expand_all(p) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(expand_all(phi.left), expand_all(phi.right))
    if isinstance(phi, FO_QUANTIFIERS + SO_QUANTIFIERS):
        return type(phi)(phi.var, expand_all(phi.body))
    return phi


def free_vars(phi: Formula) -> tuple[frozenset, frozenset]:
    """(first-order, set) variables occurring free in ``phi``."""
    fo, so = set(), set()
    _free(phi, frozenset(), fo, so)
    return frozenset(fo), frozenset(so)


def _free(phi, bound, fo, so):
    if isinstance(phi, Letter):
        names = [(phi.var, fo)]
    elif isinstance(phi, (Leq, Eq, Succ)):
        names = [(phi.left, fo), (phi.right, fo)]
    elif isinstance(phi, (In, PredIn)):
        names = [(phi.var, fo), (phi.set_var, so)]
    elif isinstance(phi, (Pos, First, Last)):
        names = [(phi.var, fo)]
    elif isinstance(phi, (Empty, Full, PosSet)):
        names = [(phi.set_var, so)]
    elif isinstance(phi, Partition):
        names = [(U, so) for U in phi.set_vars]
    elif isinstance(phi, Truth):
        names = []
    elif isinstance(phi, Not):
        return _free(phi.body, bound, fo, so)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            _free(p, bound, fo, so)
        return
    elif isinstance(phi, Implies):
        _free(phi.left, bound, fo, so)
        return _free(phi.right, bound, fo, so)
    elif isinstance(phi, FO_QUANTIFIERS + SO_QUANTIFIERS):
        return _free(phi.body, bound | {phi.var}, fo, so)
    else:
        raise TypeError(f"not an MSO formula: {phi!r}")
    for name, bucket in names:
        if name not in bound:
            bucket.add(name)


def all_vars(phi) -> set:
    """Every variable name occurring in ``phi``, free or bound."""
    out = set()

    def walk(f):
        for name in f.__dataclass_fields__:
            if name == "letter":
                continue
            value = getattr(f, name)
            for v in value if isinstance(value, tuple) else (value,):
                if isinstance(v, str):
                    out.add(v)
                elif hasattr(v, "__dataclass_fields__"):
                    walk(v)

    walk(phi)
    return out


def quantifier_rank(phi: Formula) -> int:
    if isinstance(phi, Derived):
        return quantifier_rank(phi.expand())
    if isinstance(phi, ATOMS):
        return 0
    if isinstance(phi, Not):
        return quantifier_rank(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_rank(p) for p in phi.parts), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_rank(phi.left), quantifier_rank(phi.right))
    if isinstance(phi, FO_QUANTIFIERS + SO_QUANTIFIERS):
        return 1 + quantifier_rank(phi.body)
    raise TypeError(f"not an MSO formula: {phi!r}")


# ---------------------------------------------------------------------------
# evaluation
#
# A formula compiles to ``f(s, env) -> bool`` where ``s`` is a WordStructure
# and ``env`` maps variable names to elements (ints) or sets (bit masks).
# Bound variables are written into ``env`` and restored afterwards.

Compiled = Callable[[WordStructure, dict], bool]


def compile_formula(phi: Formula) -> Compiled:
    c = _COMPILERS.get(type(phi))
    if c is None:
        raise TypeError(f"not an MSO formula: {phi!r}")
    return c(phi)


def _c_letter(phi):
    a, x = phi.letter, phi.var
    return lambda s, env: (s.letter_masks.get(a, 0) >> env[x]) & 1 == 1


def _c_leq(phi):
    x, y = phi.left, phi.right
    return lambda s, env: env[x] <= env[y]


def _c_eq(phi):
    x, y = phi.left, phi.right
    return lambda s, env: env[x] == env[y]


def _c_in(phi):
    x, X = phi.var, phi.set_var
    return lambda s, env: (env[X] >> env[x]) & 1 == 1


def _c_truth(phi):
    v = phi.value
    return lambda s, env: v


def _c_not(phi):
    f = compile_formula(phi.body)
    return lambda s, env: not f(s, env)


def _both(f, g):
    return lambda s, env: f(s, env) and g(s, env)


def _either(f, g):
    return lambda s, env: f(s, env) or g(s, env)


def _c_and(phi):
    # nested binary closures are markedly faster than all() over a generator
    fs = [compile_formula(p) for p in phi.parts]
    if not fs:
        return lambda s, env: True
    return functools.reduce(lambda acc, f: _both(f, acc), reversed(fs[:-1]), fs[-1])


def _c_or(phi):
    fs = [compile_formula(p) for p in phi.parts]
    if not fs:
        return lambda s, env: False
    return functools.reduce(lambda acc, f: _either(f, acc), reversed(fs[:-1]), fs[-1])


def _c_implies(phi):
    f, g = compile_formula(phi.left), compile_formula(phi.right)
    return lambda s, env: (not f(s, env)) or g(s, env)


def _quantifier(phi, want, elements):
    # want=True: exists (stop at first success); want=False: forall
    body = compile_formula(phi.body)
    x = phi.var

    def run(s, env):
        old = env.get(x, _MISSING)
        result = not want
        for v in elements(s):
            env[x] = v
            if body(s, env) == want:
                result = want
                break
        if old is _MISSING:
            env.pop(x, None)
        else:
            env[x] = old
        return result
    return run


_MISSING = object()


def _elements(s):
    return range(s.n + 1)


def _subsets(s):
    return range(1 << (s.n + 1))


def _c_pos(phi):
    x = phi.var
    return lambda s, env: env[x] >= 1


def _c_first(phi):
    x = phi.var
    return lambda s, env: env[x] == 0


def _c_last(phi):
    x = phi.var
    return lambda s, env: env[x] == s.n


def _c_succ(phi):
    x, y = phi.left, phi.right
    return lambda s, env: env[y] == env[x] + 1


def _c_predin(phi):
    x, X = phi.var, phi.set_var

    def run(s, env):
        v = env[x]
        return v >= 1 and (env[X] >> (v - 1)) & 1 == 1
    return run


def _c_empty(phi):
    X = phi.set_var
    return lambda s, env: env[X] == 0


def _c_full(phi):
    X = phi.set_var
    return lambda s, env: env[X] == (1 << (s.n + 1)) - 1


def _c_posset(phi):
    X = phi.set_var
    return lambda s, env: env[X] & 1 == 0


def _c_partition(phi):
    Us = phi.set_vars

    def run(s, env):
        seen = 0
        for U in Us:
            m = env[U]
            if seen & m:
                return False
            seen |= m
        return seen == (1 << (s.n + 1)) - 1
    return run


_COMPILERS = {
    Letter: _c_letter, Leq: _c_leq, Eq: _c_eq, In: _c_in, Truth: _c_truth,
    Not: _c_not, And: _c_and, Or: _c_or, Implies: _c_implies,
    Exists: lambda phi: _quantifier(phi, True, _elements),
    Forall: lambda phi: _quantifier(phi, False, _elements),
    ExistsSet: lambda phi: _quantifier(phi, True, _subsets),
    ForallSet: lambda phi: _quantifier(phi, False, _subsets),
    Pos: _c_pos, First: _c_first, Last: _c_last, Succ: _c_succ,
    Empty: _c_empty, Full: _c_full, PosSet: _c_posset, Partition: _c_partition,
    PredIn: _c_predin,
}


def check_bound(phi: Formula, env) -> None:
    fo, so = free_vars(phi)
    missing = sorted(v for v in fo | so if v not in env)
    if missing:
        raise UnboundVariable(f"unbound variable(s) {', '.join(missing)}")


def satisfies(s, sigma, phi: Formula) -> bool:
    """Truth of ``phi`` in structure ``s`` (a WordStructure, Word or str) under ``sigma``."""
    if not isinstance(s, WordStructure):
        s = word_to_structure(s)
    env = as_env(sigma)
    check_bound(phi, env)
    return compile_formula(phi)(s, env)


# ---------------------------------------------------------------------------
# stock formulas


def pos(x="x"):
    return Pos(x)


def interval(U="U"):
    """``U`` is convex: with any two members it contains everything between."""
    return Forall("_ix", Implies(In("_ix", U), Forall("_iz", Implies(
        In("_iz", U), Forall("_iy", Implies(And((Leq("_ix", "_iy"), Leq("_iy", "_iz"))),
                                            In("_iy", U)))))))


def block1(B="B", one="1"):
    """``B`` is a maximal set of consecutive positions carrying ``one``."""
    x, y = "_bx", "_by"
    only_ones = Forall(x, Implies(In(x, B), Letter(one, x)))
    maximal = Forall(x, Forall(y, Implies(
        And((Succ(x, y), Letter(one, x), Letter(one, y))),
        And((Implies(In(x, B), In(y, B)), Implies(In(y, B), In(x, B)))))))
    return And((Not(Empty(B)), only_ones, interval(B), maximal))


def first_in_block(v="v", one="1"):
    u = "_fu"
    return And((Letter(one, v), Not(Exists(u, And((Succ(u, v), Letter(one, u)))))))


def partition(*Us):
    return Partition(tuple(Us))


def subset(X, U):
    y = _fresh({X, U})
    return Forall(y, Implies(In(y, X), In(y, U)))


def relativize(phi: Formula, U: str) -> Formula:
    """``phi^U``: every quantifier restricted to elements/subsets of ``U``."""
    if isinstance(phi, Derived):
        return relativize(phi.expand(), U)
    if isinstance(phi, ATOMS):
        return phi
    if isinstance(phi, Not):
        return Not(relativize(phi.body, U))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(relativize(p, U) for p in phi.parts))
    if isinstance(phi, Implies):
        return Implies(relativize(phi.left, U), relativize(phi.right, U))
    body = relativize(phi.body, U)
    x = phi.var
    if isinstance(phi, Exists):
        return Exists(x, And((In(x, U), body)))
    if isinstance(phi, Forall):
        return Forall(x, Implies(In(x, U), body))
    if isinstance(phi, ExistsSet):
        return ExistsSet(x, And((subset(x, U), body)))
    if isinstance(phi, ForallSet):
        return ForallSet(x, Implies(subset(x, U), body))
    raise TypeError(f"not an MSO formula: {phi!r}")


def stock_formulas() -> dict:
    """Named formulas used throughout the examples (default variable names)."""
    return {
        "Pos": pos("x"),
        "Interval": interval("U"),
        "Block1": block1("B"),
        "FirstInBlock": first_in_block("v"),
        "Partition": partition,
        "Relativize": relativize,
    }


# ---------------------------------------------------------------------------
# concrete syntax

_UNARY_FO = {"pos": Pos, "first": First, "last": Last}
_UNARY_SO = {"empty": Empty, "full": Full, "posset": PosSet}
_QUANT = {"exists": Exists, "forall": Forall, "existsset": ExistsSet, "forallset": ForallSet}
_QUANT_NAME = {v: k for k, v in _QUANT.items()}


def to_sexpr(phi: Formula) -> str:
    return sexpr.write(_to_list(phi))


def _to_list(phi):
    if isinstance(phi, Letter):
        return ["P" + phi.letter, phi.var]
    if isinstance(phi, Leq):
        return ["leq", phi.left, phi.right]
    if isinstance(phi, Eq):
        return ["eq", phi.left, phi.right]
    if isinstance(phi, In):
        return ["in", phi.var, phi.set_var]
    if isinstance(phi, Truth):
        return ["true" if phi.value else "false"]
    if isinstance(phi, Not):
        return ["not", _to_list(phi.body)]
    if isinstance(phi, And):
        return ["and", *(_to_list(p) for p in phi.parts)]
    if isinstance(phi, Or):
        return ["or", *(_to_list(p) for p in phi.parts)]
    if isinstance(phi, Implies):
        return ["imp", _to_list(phi.left), _to_list(phi.right)]
    if type(phi) in _QUANT_NAME:
        return [_QUANT_NAME[type(phi)], phi.var, _to_list(phi.body)]
    for table in (_UNARY_FO, _UNARY_SO):
        for name, cls in table.items():
            if type(phi) is cls:
                return [name, phi.var if name in _UNARY_FO else phi.set_var]
    if isinstance(phi, Succ):
        return ["succ", phi.left, phi.right]
    if isinstance(phi, Partition):
        return ["partition", *phi.set_vars]
    if isinstance(phi, PredIn):
        return ["predin", phi.var, phi.set_var]
    raise TypeError(f"not an MSO formula: {phi!r}")


def parse_formula(text: str) -> Formula:
    """Parse MSO S-expression syntax; rejects rebinding an already bound name."""
    phi = from_list(sexpr.read(text))
    check_sorts(phi)
    return phi


def _name(tok):
    if not isinstance(tok, str) or not tok.replace("_", "a").isalnum():
        raise ParseError(f"expected a variable name, got {sexpr.write(tok)}")
    return tok


def from_list(e, bound=frozenset()):
    if not isinstance(e, list) or not e:
        raise ParseError(f"expected a formula, got {sexpr.write(e)!r}")
    head, args = e[0], e[1:]
    if not isinstance(head, str):
        raise ParseError(f"bad operator {sexpr.write(head)}")

    def arity(k):
        if len(args) != k:
            raise ParseError(f"'{head}' expects {k} argument(s), got {len(args)}")

    if len(head) == 2 and head[0] == "P":
        arity(1)
        return Letter(head[1], _name(args[0]))
    if head in ("leq", "eq", "in", "succ", "predin"):
        arity(2)
        cls = {"leq": Leq, "eq": Eq, "in": In, "succ": Succ, "predin": PredIn}[head]
        return cls(_name(args[0]), _name(args[1]))
    if head in ("true", "false"):
        arity(0)
        return Truth(head == "true")
    if head == "not":
        arity(1)
        return Not(from_list(args[0], bound))
    if head in ("and", "or"):
        parts = tuple(from_list(a, bound) for a in args)
        return And(parts) if head == "and" else Or(parts)
    if head == "imp":
        arity(2)
        return Implies(from_list(args[0], bound), from_list(args[1], bound))
    if head in _QUANT:
        arity(2)
        x = _name(args[0])
        if x in bound:
            raise ParseError(f"variable {x} rebinds an enclosing binder")
        return _QUANT[head](x, from_list(args[1], bound | {x}))
    if head in _UNARY_FO:
        arity(1)
        return _UNARY_FO[head](_name(args[0]))
    if head in _UNARY_SO:
        arity(1)
        return _UNARY_SO[head](_name(args[0]))
    if head == "partition":
        if not args:
            raise ParseError("partition needs at least one set")
        return Partition(tuple(_name(a) for a in args))
    raise ParseError(f"unknown operator '{head}'")


def check_sorts(phi: Formula) -> None:
    """Reject a name used both as an element and as a set variable."""
    sorts: dict = {}

    def note(name, sort):
        if sorts.setdefault(name, sort) != sort:
            raise ParseError(f"variable {name} used both as element and as set")

    def walk(f):
        if isinstance(f, FO_QUANTIFIERS):
            note(f.var, "fo")
            return walk(f.body)
        if isinstance(f, SO_QUANTIFIERS):
            note(f.var, "so")
            return walk(f.body)
        if isinstance(f, Letter) or isinstance(f, (Pos, First, Last)):
            note(f.var, "fo")
        elif isinstance(f, (Leq, Eq, Succ)):
            note(f.left, "fo")
            note(f.right, "fo")
        elif isinstance(f, (In, PredIn)):
            note(f.var, "fo")
            note(f.set_var, "so")
        elif isinstance(f, (Empty, Full, PosSet)):
            note(f.set_var, "so")
        elif isinstance(f, Partition):
            for U in f.set_vars:
                note(U, "so")
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p)
        elif isinstance(f, Implies):
            walk(f.left)
            walk(f.right)

    walk(phi)
