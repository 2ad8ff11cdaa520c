"""Weighted MSO: syntax, weighted evaluation and fragment classification.

Disjunction and existential quantifiers are evaluated as semiring sums,
conjunction and universal quantifiers as products.  Quantifiers range over
letter positions ``1..n`` and sets of them (position 0 of the MSO encoding
is not part of this word model).

Atoms are shared with :mod:`msolwords.mso`.  ``Not`` may wrap an atom or,
more generally, any formula of the boolean fragment bMSOL; its value is one
when the operand evaluates to zero and zero otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Any

from . import mso, sexpr
from .errors import FragmentError, ParseError, UnboundVariable
from .mso import In, Leq, Letter, Truth
from .semiring import Semiring
from .words import WordStructure, as_env, enumerate_words, word_to_structure
from .msoleval import literal_to_str, parse_literal


class WFormula:
    __slots__ = ()

    def __str__(self):
        return to_sexpr(self)


@dataclass(frozen=True)
class Const(WFormula):
    """A weight ``k``; ``True``/``False`` denote the semiring's one/zero."""
    value: Any


@dataclass(frozen=True)
class Not(WFormula):
    body: Any


@dataclass(frozen=True)
class And(WFormula):
    parts: tuple


@dataclass(frozen=True)
class Or(WFormula):
    parts: tuple


@dataclass(frozen=True)
class Exists(WFormula):
    var: str
    body: Any


@dataclass(frozen=True)
class Forall(WFormula):
    var: str
    body: Any


@dataclass(frozen=True)
class ExistsSet(WFormula):
    var: str
    body: Any


@dataclass(frozen=True)
class ForallSet(WFormula):
    var: str
    body: Any


ATOMS = (Letter, Leq, In, Truth)
QUANTIFIERS = (Exists, Forall, ExistsSet, ForallSet)


# ---------------------------------------------------------------------------
# fragments


def is_bmsol(phi, S: Semiring | None = None) -> bool:
    """Syntactic membership in the boolean fragment.

    Constants count only when equal to ``S.zero``/``S.one`` (``S`` given) or
    written as ``True``/``False``.  A disjunction is admitted when its parts
    are pairwise exclusive by a complementary literal (see :func:`exclusive`),
    since only then does the weighted sum stay in {0, 1}.
    """
    if isinstance(phi, ATOMS):
        return True
    if isinstance(phi, Const):
        if isinstance(phi.value, bool):
            return True
        if S is None:
            return False
        try:
            k = S.coerce(phi.value)
        except TypeError:
            return False
        return k == S.zero or k == S.one
    if isinstance(phi, Not):
        return is_bmsol(phi.body, S)
    if isinstance(phi, And):
        return all(is_bmsol(p, S) for p in phi.parts)
    if isinstance(phi, (Forall, ForallSet)):
        return is_bmsol(phi.body, S)
    if isinstance(phi, Or):
        return all(is_bmsol(p, S) for p in phi.parts) and all(
            exclusive(a, b) for a, b in combinations(phi.parts, 2))
    return False


def _literals(phi):
    if isinstance(phi, And):
        for p in phi.parts:
            yield from _literals(p)
    else:
        yield phi


def consistent(parts) -> bool:
    """No two of ``parts`` are syntactically exclusive."""
    return not any(exclusive(a, b) for a, b in combinations(parts, 2))


def exclusive(a, b) -> bool:
    """``a`` and ``b`` cannot both hold: one has a conjunct negated in the other."""
    la, lb = {a, *_literals(a)}, {b, *_literals(b)}
    for lits, other in ((la, lb), (lb, la)):
        for x in lits:
            if x in (Truth(False), Const(False)):
                return True
            if isinstance(x, Not) and x.body in other:
                return True
    return False


@dataclass(frozen=True)
class Step:
    """``phi = OR_i (guards[i] AND weights[i])`` with bMSOL guards.

    ``weights[i]`` is the tuple of constants conjoined in case ``i``; their
    product is the case weight.
    """
    guards: tuple
    weights: tuple


def step_decompose(phi, S: Semiring | None = None) -> Step | None:
    """Read ``phi`` as a bMSOL-step formula, or return ``None``.

    A bMSOL formula ``psi`` counts as ``psi AND 1``, a bare constant ``k``
    as ``TRUE AND k``; inside a case, constants may appear anywhere in the
    conjunction.
    """
    disjuncts = list(_disjuncts(phi))
    guards, weights = [], []
    for d in disjuncts:
        if is_bmsol(d, S) and not isinstance(d, (Const, And)):
            guards.append(d)
            weights.append(())
            continue
        consts, rest = [], []
        for c in _literals(d):
            (consts if isinstance(c, Const) else rest).append(c)
        if not all(is_bmsol(r, S) for r in rest):
            return None
        guard = rest[0] if len(rest) == 1 else (And(tuple(rest)) if rest else Truth(True))
        guards.append(guard)
        weights.append(tuple(c.value for c in consts))
    return Step(tuple(guards), tuple(weights))


def _disjuncts(phi):
    if isinstance(phi, Or):
        for p in phi.parts:
            yield from _disjuncts(p)
    else:
        yield phi


@dataclass(frozen=True)
class FragmentClass:
    is_bmsol: bool
    is_step: bool
    is_rmsol: bool
    is_full: bool

    def labels(self):
        return [name for name in ("bmsol", "step", "rmsol", "full") if getattr(self, f"is_{name}")]


def well_formed(phi, S: Semiring | None = None):
    """First subformula breaking the weighted grammar (``Not`` over a non-bMSOL
    operand), or ``None``."""
    for sub in _walk(phi):
        if isinstance(sub, Not) and not is_bmsol(sub.body, S):
            return sub
    return None


def rmsol_violation(phi, S: Semiring | None = None):
    """First subformula that takes ``phi`` outside RMSOL, or ``None``."""
    bad = well_formed(phi, S)
    if bad is not None:
        return bad
    for sub in _walk(phi):
        if isinstance(sub, ForallSet) and not is_bmsol(sub.body, S):
            return sub
        if isinstance(sub, Forall) and step_decompose(sub.body, S) is None:
            return sub
    return None


def classify(phi, S: Semiring | None = None) -> FragmentClass:
    full = well_formed(phi, S) is None
    return FragmentClass(
        is_bmsol=full and is_bmsol(phi, S),
        is_step=full and step_decompose(phi, S) is not None,
        is_rmsol=rmsol_violation(phi, S) is None,
        is_full=full,
    )


def _walk(phi):
    yield phi
    if isinstance(phi, Not):
        yield from _walk(phi.body)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            yield from _walk(p)
    elif isinstance(phi, QUANTIFIERS):
        yield from _walk(phi.body)


def free_vars(phi) -> tuple[frozenset, frozenset]:
    fo, so = set(), set()

    def walk(f, bound):
        if isinstance(f, Letter):
            names = [(f.var, fo)]
        elif isinstance(f, Leq):
            names = [(f.left, fo), (f.right, fo)]
        elif isinstance(f, In):
            names = [(f.var, fo), (f.set_var, so)]
        elif isinstance(f, (Truth, Const)):
            names = []
        elif isinstance(f, Not):
            return walk(f.body, bound)
        elif isinstance(f, (And, Or)):
            for p in f.parts:
                walk(p, bound)
            return
        elif isinstance(f, QUANTIFIERS):
            return walk(f.body, bound | {f.var})
        else:
            raise TypeError(f"not a weighted formula: {f!r}")
        for name, bucket in names:
            if name not in bound:
                bucket.add(name)

    walk(phi, frozenset())
    return frozenset(fo), frozenset(so)


def all_vars(phi) -> set:
    out = set()
    for sub in _walk(phi):
        if isinstance(sub, QUANTIFIERS):
            out.add(sub.var)
        elif isinstance(sub, ATOMS):
            out |= mso.all_vars(sub)
    return out


def depth(phi) -> int:
    if isinstance(phi, ATOMS + (Const,)):
        return 0
    if isinstance(phi, Not):
        return 1 + depth(phi.body)
    if isinstance(phi, (And, Or)):
        return 1 + max((depth(p) for p in phi.parts), default=0)
    return 1 + depth(phi.body)


# ---------------------------------------------------------------------------
# weighted evaluation


def compile_weighted(phi, S: Semiring):
    """Compile to ``f(s, env) -> element`` (quantifiers over positions ``1..n``).

    Subformulas of the boolean fragment are compiled to plain predicates and
    only lifted to ``zero``/``one`` at their root.
    """
    return _compile(phi, S)[0]


def _lift(test, S):
    zero, one = S.zero, S.one
    return lambda s, env: one if test(s, env) else zero


def _compile(phi, S: Semiring):
    """``(weighted, boolean)`` closures; ``boolean`` is None outside bMSOL."""
    zero, one = S.zero, S.one
    if isinstance(phi, ATOMS):
        test = mso.compile_formula(phi)
        return _lift(test, S), test
    if isinstance(phi, Const):
        value = S.coerce(phi.value)
        test = None
        if value == one or value == zero:
            flag = value == one
            test = lambda s, env: flag  # noqa: E731
        return (lambda s, env: value), test
    if isinstance(phi, Not):
        f, b = _compile(phi.body, S)
        if b is None:
            return (lambda s, env: one if f(s, env) == zero else zero), None
        test = lambda s, env: not b(s, env)  # noqa: E731
        return _lift(test, S), test
    if isinstance(phi, (And, Or)):
        compiled = [_compile(p, S) for p in phi.parts]
        tests = [b for _, b in compiled]
        boolean = all(b is not None for b in tests)
        if isinstance(phi, Or):
            boolean = boolean and all(exclusive(a, b) for a, b in combinations(phi.parts, 2))
        if boolean:
            if isinstance(phi, And):
                test = lambda s, env: all(b(s, env) for b in tests)  # noqa: E731
            else:
                test = lambda s, env: any(b(s, env) for b in tests)  # noqa: E731
            return _lift(test, S), test
        # constant factors first: they are cheap and may be zero
        fs = [f for p, (f, _) in sorted(zip(phi.parts, compiled),
                                         key=lambda pc: not isinstance(pc[0], Const))]
        if isinstance(phi, Or):
            add = S.add

            def disjunction(s, env):
                acc = zero
                for f in fs:
                    acc = add(acc, f(s, env))
                return acc
            return disjunction, None
        mul = S.mul

        def conjunction(s, env):
            acc = one
            for f in fs:
                x = f(s, env)
                if x == zero:
                    return zero
                acc = mul(acc, x)
            return acc
        return conjunction, None
    if isinstance(phi, QUANTIFIERS):
        body, b = _compile(phi.body, S)
        x = phi.var
        is_set = isinstance(phi, (ExistsSet, ForallSet))
        universal = isinstance(phi, (Forall, ForallSet))

        def values(s):
            return range(0, 1 << (s.n + 1), 2) if is_set else range(1, s.n + 1)

        if universal and b is not None:
            def test(s, env):
                old = env.get(x, _MISSING)
                result = True
                for v in values(s):
                    env[x] = v
                    if not b(s, env):
                        result = False
                        break
                _restore(env, x, old)
                return result
            return _lift(test, S), test

        if universal:
            start, op, stop = one, S.mul, zero
        else:
            start, op, stop = zero, S.add, None

        def quantifier(s, env):
            old = env.get(x, _MISSING)
            acc = start
            for v in values(s):
                env[x] = v
                acc = op(acc, body(s, env))
                if stop is not None and acc == stop:
                    break
            _restore(env, x, old)
            return acc
        return quantifier, None
    raise TypeError(f"not a weighted formula: {phi!r}")


def _restore(env, name, old):
    if old is _MISSING:
        env.pop(name, None)
    else:
        env[name] = old


_MISSING = object()


def we_eval(phi, w, sigma=None, S: Semiring | None = None):
    """Weighted value of ``phi`` on ``w`` under ``sigma``.

    Variables in ``sigma`` must denote positions ``1..n`` (resp. sets of them).
    """
    if S is None:
        raise TypeError("we_eval needs a semiring")
    bad = well_formed(phi, S)
    if bad is not None:
        raise FragmentError(f"negation over a non-boolean formula: {bad}", bad)
    s = w if isinstance(w, WordStructure) else word_to_structure(w)
    env = as_env(sigma)
    fo, so = free_vars(phi)
    missing = sorted(v for v in fo | so if v not in env)
    if missing:
        raise UnboundVariable(f"unbound variable(s) {', '.join(missing)}")
    return compile_weighted(phi, S)(s, env)


def bmsol_to_mso(phi) -> mso.Formula:
    """Classical reading of a bMSOL formula over the MSO encoding.

    Quantifiers are relativised to letter positions so that the result has
    the same truth value on ``{0} u [n]`` as ``phi`` has on ``[n]``.
    """
    if isinstance(phi, ATOMS):
        return phi
    if isinstance(phi, Const):
        if isinstance(phi.value, bool):
            return Truth(phi.value)
        raise FragmentError("weighted constant inside a boolean formula", phi)
    if isinstance(phi, Not):
        return mso.Not(bmsol_to_mso(phi.body))
    if isinstance(phi, And):
        return mso.And(tuple(bmsol_to_mso(p) for p in phi.parts))
    if isinstance(phi, Or):
        return mso.Or(tuple(bmsol_to_mso(p) for p in phi.parts))
    if isinstance(phi, Forall):
        return mso.Forall(phi.var, mso.Implies(mso.Pos(phi.var), bmsol_to_mso(phi.body)))
    if isinstance(phi, ForallSet):
        return mso.ForallSet(phi.var, mso.Implies(mso.PosSet(phi.var), bmsol_to_mso(phi.body)))
    raise FragmentError(f"not a bMSOL formula: {phi}", phi)


def normalize_constants(phi, S: Semiring):
    """Replace constants equal to zero/one by ``False``/``True``."""
    if isinstance(phi, Const) and not isinstance(phi.value, bool):
        k = S.coerce(phi.value)
        if k == S.zero:
            return Const(False)
        if k == S.one:
            return Const(True)
        return phi
    if isinstance(phi, Not):
        return Not(normalize_constants(phi.body, S))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(normalize_constants(p, S) for p in phi.parts))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(phi.var, normalize_constants(phi.body, S))
    return phi


# ---------------------------------------------------------------------------
# concrete syntax

_QUANT = {"exists": Exists, "forall": Forall, "existsset": ExistsSet, "forallset": ForallSet}
_QUANT_NAME = {v: k for k, v in _QUANT.items()}


def to_sexpr(phi, S: Semiring | None = None) -> str:
    return sexpr.write(_to_list(phi, S))


def _to_list(phi, S):
    if isinstance(phi, Const):
        return ["k", literal_to_str(phi.value, S)]
    if isinstance(phi, ATOMS):
        return mso._to_list(phi)
    if isinstance(phi, Not):
        return ["not", _to_list(phi.body, S)]
    if isinstance(phi, (And, Or)):
        return ["and" if isinstance(phi, And) else "or", *(_to_list(p, S) for p in phi.parts)]
    if isinstance(phi, QUANTIFIERS):
        return [_QUANT_NAME[type(phi)], phi.var, _to_list(phi.body, S)]
    raise TypeError(f"not a weighted formula: {phi!r}")


def render(phi, S: Semiring | None = None) -> str:
    """S-expression preceded by a comment line naming its fragments."""
    cls = classify(phi, S)
    return f"; fragments: {' '.join(cls.labels()) or 'none'}\n{to_sexpr(phi, S)}"


def parse_wformula(text: str, S: Semiring | None = None):
    phi = _from_list(sexpr.read(text), S, frozenset())
    bad = well_formed(phi, S)
    if bad is not None:
        raise ParseError(f"negation is only allowed over boolean formulas: {to_sexpr(bad)}")
    _check_sorts(phi)
    return phi


def _from_list(e, S, bound):
    if not isinstance(e, list) or not e or not isinstance(e[0], str):
        raise ParseError(f"expected a weighted formula, got {sexpr.write(e)!r}")
    head, args = e[0], e[1:]
    if head == "k":
        if len(args) != 1 or not isinstance(args[0], str):
            raise ParseError("k expects one literal")
        return Const(parse_literal(args[0], S))
    if head in ("true", "false") or head in ("leq", "in") or (len(head) == 2 and head[0] == "P"):
        return mso.from_list(e, bound)
    if head == "not":
        if len(args) != 1:
            raise ParseError("not expects one argument")
        return Not(_from_list(args[0], S, bound))
    if head in ("and", "or"):
        parts = tuple(_from_list(a, S, bound) for a in args)
        return And(parts) if head == "and" else Or(parts)
    if head in _QUANT:
        if len(args) != 2:
            raise ParseError(f"'{head}' expects a variable and a body")
        x = mso._name(args[0])
        if x in bound:
            raise ParseError(f"variable {x} rebinds an enclosing binder")
        return _QUANT[head](x, _from_list(args[1], S, bound | {x}))
    raise ParseError(f"operator '{head}' is not part of weighted MSO")


def _check_sorts(phi):
    sorts: dict = {}
    for sub in _walk(phi):
        pairs = []
        if isinstance(sub, (Exists, Forall)):
            pairs = [(sub.var, "fo")]
        elif isinstance(sub, (ExistsSet, ForallSet)):
            pairs = [(sub.var, "so")]
        elif isinstance(sub, Letter):
            pairs = [(sub.var, "fo")]
        elif isinstance(sub, Leq):
            pairs = [(sub.left, "fo"), (sub.right, "fo")]
        elif isinstance(sub, In):
            pairs = [(sub.var, "fo"), (sub.set_var, "so")]
        for name, sort in pairs:
            if sorts.setdefault(name, sort) != sort:
                raise ParseError(f"variable {name} used both as element and as set")


# ---------------------------------------------------------------------------
# boolean collapse check


def position_assignments(s: WordStructure, fo, so):
    """All environments sending ``fo`` to positions ``1..n`` and ``so`` to sets of them."""
    fo, so = sorted(fo), sorted(so)
    elems = range(1, s.n + 1)
    masks = range(0, 1 << (s.n + 1), 2)
    for fvals in product(elems, repeat=len(fo)):
        for svals in product(masks, repeat=len(so)):
            env = dict(zip(fo, fvals))
            env.update(zip(so, svals))
            yield env


@dataclass
class BmsolReport:
    formula: Any
    checked: int = 0
    failures: list = field(default_factory=list)  # (word, env, weighted value, truth)

    @property
    def passed(self) -> bool:
        return not self.failures


def bmsol_boolean_check(phi, max_len: int, S: Semiring, alphabet: str = "01") -> BmsolReport:
    """Check that ``phi`` takes only values zero/one and agrees with classical truth."""
    if not is_bmsol(phi, S):
        raise FragmentError(f"not a bMSOL formula: {to_sexpr(phi, S)}", phi)
    phi = normalize_constants(phi, S)
    weighted = compile_weighted(phi, S)
    classical = mso.compile_formula(bmsol_to_mso(phi))
    fo, so = free_vars(phi)
    report = BmsolReport(phi)
    for w in enumerate_words(alphabet, max_len):
        s = word_to_structure(w)
        for env in position_assignments(s, fo, so):
            value = weighted(s, dict(env))
            truth = classical(s, dict(env))
            report.checked += 1
            if value != (S.one if truth else S.zero):
                report.failures.append((str(w), env, value, truth))
    return report
