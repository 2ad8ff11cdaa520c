"""Seeded random generators for formulas, terms and automata.

All generators take a :class:`random.Random` so runs are reproducible from a
seed.  Generated formulas and terms are closed unless free variables are
requested explicitly, and never rebind a name.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import mso, wmsol
from .automata import WeightedAutomaton
from .msoleval import Const, FoSum, Product, SetSum, StdMonomial
from .semiring import INF, RAT, TROP_MIN, Semiring

RAT_WEIGHTS = (0, 1, 2, Fraction(1, 2))
TROP_MIN_WEIGHTS = (INF, 0, 1, 2)


def weights_for(S: Semiring) -> tuple:
    if S is TROP_MIN:
        return TROP_MIN_WEIGHTS
    if S is RAT:
        return RAT_WEIGHTS
    return (S.zero, S.one, S.add(S.one, S.one))


@dataclass
class Scope:
    """Variables available at a point of a formula, plus a name supply."""
    fo: tuple = ()
    so: tuple = ()
    counter: list = field(default_factory=lambda: [0])

    def fresh(self, base: str) -> str:
        self.counter[0] += 1
        return f"{base}{self.counter[0]}"

    def with_fo(self, x):
        return Scope(self.fo + (x,), self.so, self.counter)

    def with_so(self, X):
        return Scope(self.fo, self.so + (X,), self.counter)


def _atom(rng: random.Random, scope: Scope, alphabet: str):
    """A random atomic formula over the variables in scope (or a truth constant)."""
    options = ["truth"]
    if scope.fo:
        options += ["letter", "letter", "leq"]
        if scope.so:
            options += ["in", "in"]
    kind = rng.choice(options)
    if kind == "truth":
        return mso.Truth(rng.random() < 0.5)
    if kind == "letter":
        return mso.Letter(rng.choice(alphabet), rng.choice(scope.fo))
    if kind == "leq":
        return mso.Leq(rng.choice(scope.fo), rng.choice(scope.fo))
    return mso.In(rng.choice(scope.fo), rng.choice(scope.so))


# ---------------------------------------------------------------------------
# classical MSO


def random_mso(rng: random.Random, depth: int, scope: Scope | None = None,
               alphabet: str = "01", macros: bool = True) -> mso.Formula:
    """Random MSO formula using the full syntax (and macros when asked)."""
    scope = scope or Scope()
    if depth <= 0 or rng.random() < 0.25:
        if macros and rng.random() < 0.3:
            return _macro(rng, scope) or _atom(rng, scope, alphabet)
        return _atom(rng, scope, alphabet)
    kind = rng.choice(["not", "and", "or", "imp", "eq", "ex", "all", "exset", "allset"])
    sub = lambda sc=scope: random_mso(rng, depth - 1, sc, alphabet, macros)  # noqa: E731
    if kind == "not":
        return mso.Not(sub())
    if kind in ("and", "or"):
        parts = tuple(sub() for _ in range(rng.randint(2, 3)))
        return mso.And(parts) if kind == "and" else mso.Or(parts)
    if kind == "imp":
        return mso.Implies(sub(), sub())
    if kind == "eq":
        if len(scope.fo) >= 1:
            return mso.Eq(rng.choice(scope.fo), rng.choice(scope.fo))
        return sub()
    if kind in ("ex", "all"):
        x = scope.fresh("x")
        cls = mso.Exists if kind == "ex" else mso.Forall
        return cls(x, sub(scope.with_fo(x)))
    X = scope.fresh("X")
    cls = mso.ExistsSet if kind == "exset" else mso.ForallSet
    return cls(X, sub(scope.with_so(X)))


def _macro(rng, scope):
    options = []
    if scope.fo:
        options += ["pos", "first", "last", "succ"]
        if scope.so:
            options.append("predin")
    if scope.so:
        options += ["empty", "full", "posset", "partition"]
    if not options:
        return None
    kind = rng.choice(options)
    if kind in ("pos", "first", "last"):
        return {"pos": mso.Pos, "first": mso.First, "last": mso.Last}[kind](rng.choice(scope.fo))
    if kind == "succ":
        return mso.Succ(rng.choice(scope.fo), rng.choice(scope.fo))
    if kind == "predin":
        return mso.PredIn(rng.choice(scope.fo), rng.choice(scope.so))
    if kind == "partition":
        k = rng.randint(1, min(3, len(scope.so)))
        return mso.Partition(tuple(rng.sample(scope.so, k)))
    return {"empty": mso.Empty, "full": mso.Full, "posset": mso.PosSet}[kind](rng.choice(scope.so))


# ---------------------------------------------------------------------------
# weighted formulas


def random_bmsol(rng: random.Random, depth: int, scope: Scope | None = None,
                 alphabet: str = "01"):
    """Random formula of the boolean fragment (with exclusive disjunctions)."""
    scope = scope or Scope()
    if depth <= 0 or rng.random() < 0.2:
        return _literal(rng, scope, alphabet)
    kind = rng.choice(["not", "and", "all", "allset", "xor"])
    if kind == "not":
        return wmsol.Not(random_bmsol(rng, depth - 1, scope, alphabet))
    if kind == "and":
        return wmsol.And(tuple(random_bmsol(rng, depth - 1, scope, alphabet)
                               for _ in range(rng.randint(2, 3))))
    if kind == "xor":
        # psi or (not psi and chi): exclusive by construction
        psi = random_bmsol(rng, depth - 1, scope, alphabet)
        chi = random_bmsol(rng, depth - 1, scope, alphabet)
        return wmsol.Or((psi, wmsol.And((wmsol.Not(psi), chi))))
    if kind == "all":
        x = scope.fresh("x")
        return wmsol.Forall(x, random_bmsol(rng, depth - 1, scope.with_fo(x), alphabet))
    X = scope.fresh("X")
    return wmsol.ForallSet(X, random_bmsol(rng, depth - 1, scope.with_so(X), alphabet))


def _literal(rng, scope, alphabet):
    if rng.random() < 0.15:
        return wmsol.Const(rng.random() < 0.5)
    a = _atom(rng, scope, alphabet)
    if isinstance(a, mso.Truth):
        return a
    return wmsol.Not(a) if rng.random() < 0.4 else a


def random_step(rng: random.Random, scope: Scope, weights, alphabet: str = "01", guard_depth: int = 1):
    """``OR_i (phi_i and k_i)`` with one to three cases."""
    cases = []
    for _ in range(rng.randint(1, 3)):
        guard = random_bmsol(rng, guard_depth, scope, alphabet)
        cases.append(wmsol.And((guard, wmsol.Const(rng.choice(weights)))))
    return cases[0] if len(cases) == 1 else wmsol.Or(tuple(cases))


def random_rmsol(rng: random.Random, depth: int, weights, scope: Scope | None = None,
                 alphabet: str = "01"):
    """Random closed RMSOL formula of nesting depth at most ``depth``."""
    scope = scope or Scope()
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.5 or not scope.fo:
            return wmsol.Const(rng.choice(weights))
        return _literal(rng, scope, alphabet)
    kind = rng.choice(["or", "and", "ex", "exset", "allstep", "allset", "bmsol"])
    if kind in ("or", "and"):
        parts = tuple(random_rmsol(rng, depth - 1, weights, scope, alphabet) for _ in range(2))
        return wmsol.Or(parts) if kind == "or" else wmsol.And(parts)
    if kind == "ex":
        x = scope.fresh("x")
        return wmsol.Exists(x, random_rmsol(rng, depth - 1, weights, scope.with_fo(x), alphabet))
    if kind == "exset":
        X = scope.fresh("X")
        return wmsol.ExistsSet(X, random_rmsol(rng, depth - 1, weights, scope.with_so(X), alphabet))
    if kind == "allstep":
        x = scope.fresh("x")
        return wmsol.Forall(x, random_step(rng, scope.with_fo(x), weights, alphabet,
                                           guard_depth=min(1, depth - 1)))
    if kind == "allset":
        X = scope.fresh("X")
        return wmsol.ForallSet(X, random_bmsol(rng, depth - 1, scope.with_so(X), alphabet))
    return random_bmsol(rng, depth, scope, alphabet)


def random_wmsol(rng: random.Random, depth: int, weights, scope: Scope | None = None,
                 alphabet: str = "01"):
    """Random closed formula of full weighted MSO (universal quantifiers unrestricted)."""
    scope = scope or Scope()
    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.5 or not scope.fo:
            return wmsol.Const(rng.choice(weights))
        return _literal(rng, scope, alphabet)
    kind = rng.choice(["or", "and", "ex", "exset", "all", "allset"])
    if kind in ("or", "and"):
        parts = tuple(random_wmsol(rng, depth - 1, weights, scope, alphabet) for _ in range(2))
        return wmsol.Or(parts) if kind == "or" else wmsol.And(parts)
    if kind in ("ex", "all"):
        x = scope.fresh("x")
        cls = wmsol.Exists if kind == "ex" else wmsol.Forall
        return cls(x, random_wmsol(rng, depth - 1, weights, scope.with_fo(x), alphabet))
    X = scope.fresh("X")
    cls = wmsol.ExistsSet if kind == "exset" else wmsol.ForallSet
    return cls(X, random_wmsol(rng, depth - 1, weights, scope.with_so(X), alphabet))


# ---------------------------------------------------------------------------
# terms


def random_term(rng: random.Random, depth: int, weights, scope: Scope | None = None,
                alphabet: str = "01", guard_depth: int = 1, set_budget: int = 2):
    """Random closed ground term of nesting depth at most ``depth``.

    ``set_budget`` caps the number of set variables bound by set sums along
    any branch, which keeps exhaustive evaluation affordable.
    """
    scope = scope or Scope()

    def guard(sc):
        return random_mso(rng, guard_depth, sc, alphabet)

    def sub(sc, budget=set_budget):
        return random_term(rng, depth - 1, weights, sc, alphabet, guard_depth, budget)

    if depth <= 0 or rng.random() < 0.2:
        if rng.random() < 0.4:
            return Const(rng.choice(weights))
        v = scope.fresh("v")
        return StdMonomial(rng.choice(weights), v, guard(scope.with_fo(v)))
    kinds = ["mon", "prod", "fosum"] + (["setsum"] if set_budget > 0 else [])
    kind = rng.choice(kinds)
    if kind == "mon":
        v = scope.fresh("v")
        return StdMonomial(rng.choice(weights), v, guard(scope.with_fo(v)))
    if kind == "prod":
        return Product(tuple(sub(scope) for _ in range(rng.randint(2, 3))))
    if kind == "fosum":
        v = scope.fresh("v")
        inner = scope.with_fo(v)
        return FoSum(v, guard(inner), sub(inner))
    k = 2 if set_budget >= 2 and rng.random() < 0.3 else 1
    names = tuple(scope.fresh("R") for _ in range(k))
    inner = scope
    for R in names:
        inner = inner.with_so(R)
    return SetSum(names, guard(inner), sub(inner, set_budget - k))


# ---------------------------------------------------------------------------
# automata


def random_automaton(rng: random.Random, S: Semiring, weights=None, max_size: int = 3,
                     alphabet: str = "01", size: int | None = None) -> WeightedAutomaton:
    weights = weights_for(S) if weights is None else weights
    r = size if size is not None else rng.randint(1, max_size)
    pick = lambda: rng.choice(weights)  # noqa: E731
    return WeightedAutomaton.build(
        S, alphabet,
        [pick() for _ in range(r)],
        [pick() for _ in range(r)],
        {a: [[pick() for _ in range(r)] for _ in range(r)] for a in alphabet},
    )


def random_word(rng: random.Random, max_len: int, alphabet: str = "01") -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
