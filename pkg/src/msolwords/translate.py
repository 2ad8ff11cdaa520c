"""Translations between restricted weighted MSO and MSOL-polynomial terms.

Weighted formulas quantify over letter positions ``1..n``; terms range over
``{0} u [n]``.  Going to terms, every quantifier is guarded by ``Pos`` (or
``PosSet``).  Going back, each bound variable is split on whether it denotes
the element 0 (resp. whether a set contains 0), so the resulting weighted
formula only ever quantifies over positions.  Free variables are taken to
denote positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any

from . import mso, wmsol
from .errors import FragmentError, NotGroundError
from .msoleval import (Const, FoSum, Ind, Product, SetSum, StdMonomial, Term, all_vars,
                       compile_term, const_term, fresh_name,
                       free_vars as term_free_vars, term_product, term_sum, tv_term)
from .semiring import Poly, Semiring
from .words import enumerate_words, word_to_structure


@dataclass
class TranslationReport:
    source: Any
    result: Any
    certificate: Any = None  # FragmentClass of a weighted input
    guards: list = field(default_factory=list)
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# weighted formula -> term


def to_mso(phi) -> mso.Formula:
    """Classical reading of a bMSOL formula, relativised to positions."""
    return wmsol.bmsol_to_mso(phi)


def rmsol_to_msoleval(phi, S: Semiring, report: TranslationReport | None = None) -> Term:
    """Term with the same value as the RMSOL formula ``phi`` on every word."""
    bad = wmsol.rmsol_violation(phi, S)
    if bad is not None:
        raise FragmentError(f"not an RMSOL formula; offending part: {wmsol.to_sexpr(bad, S)}", bad)
    if report is None:
        report = TranslationReport(phi, None)
    return _tr(wmsol.normalize_constants(phi, S), S, report)


def translate_rmsol(phi, S: Semiring) -> TranslationReport:
    report = TranslationReport(phi, None, wmsol.classify(phi, S))
    report.result = rmsol_to_msoleval(phi, S, report)
    return report


def _tr(phi, S, report) -> Term:
    if isinstance(phi, wmsol.Const):
        return const_term(phi.value)
    if wmsol.is_bmsol(phi, S):
        return tv_term(to_mso(phi))
    if isinstance(phi, wmsol.Or):
        return term_sum(*(_tr(p, S, report) for p in phi.parts))
    if isinstance(phi, wmsol.And):
        return term_product(*(_tr(p, S, report) for p in phi.parts))
    if isinstance(phi, wmsol.Exists):
        report.guards.append(f"pos({phi.var})")
        return FoSum(phi.var, mso.Pos(phi.var), _tr(phi.body, S, report))
    if isinstance(phi, wmsol.ExistsSet):
        report.guards.append(f"posset({phi.var})")
        return SetSum((phi.var,), mso.PosSet(phi.var), _tr(phi.body, S, report))
    if isinstance(phi, wmsol.Forall):
        return _tr_step_forall(phi, S, report)
    raise FragmentError(f"cannot translate {wmsol.to_sexpr(phi, S)}", phi)


def _tr_step_forall(phi, S, report) -> Term:
    """``forall x. OR_i (phi_i and k_i)`` as a product of exclusive-case monomials.

    At a position where exactly the guards in ``C`` hold, the factor is the sum
    of the ``k_i`` for ``i`` in ``C``; one monomial per subset ``C``.
    """
    step = wmsol.step_decompose(phi.body, S)
    x = phi.var
    guards = [to_mso(g) for g in step.guards]
    weights = [S.prod(S.coerce(k) for k in ks) for ks in step.weights]
    report.guards.append(f"pos({x})")
    factors = []
    for chosen in cartesian((True, False), repeat=len(guards)):
        if not wmsol.consistent([g if c else wmsol.Not(g) for g, c in zip(step.guards, chosen)]):
            continue
        value = S.sum(k for k, c in zip(weights, chosen) if c)
        case = [g if c else mso.Not(g) for g, c in zip(guards, chosen)]
        factors.append(StdMonomial(_literal(value, S), x, mso.And((mso.Pos(x), *case))))
    return Product(tuple(factors))


def _literal(value, S: Semiring):
    if value == S.zero:
        return False
    if value == S.one:
        return True
    return value


# ---------------------------------------------------------------------------
# term -> weighted formula

ZERO_F = mso.Truth(False)
ONE_F = mso.Truth(True)

# Products with more monomials than this are translated factor by factor
# (a conjunction of universal formulas) instead of one case split.
MERGE_LIMIT = 6


def to_bmsol(phi: mso.Formula, ctx: dict):
    """bMSOL formula over positions equivalent to ``phi`` over ``{0} u [n]``.

    ``ctx`` maps first-order variables to ``"zero"``/``"pos"`` and set
    variables to whether they contain 0.  Unknown names count as positions
    (resp. sets of positions).  Truth constants are folded away as they arise.
    """
    if isinstance(phi, mso.Letter):
        return ZERO_F if _is_zero(ctx, phi.var) else phi
    if isinstance(phi, mso.Leq):
        if _is_zero(ctx, phi.left):
            return ONE_F
        if _is_zero(ctx, phi.right):
            return ZERO_F
        return phi
    if isinstance(phi, mso.Eq):
        zl, zr = _is_zero(ctx, phi.left), _is_zero(ctx, phi.right)
        if zl or zr:
            return _truth(zl and zr)
        if phi.left == phi.right:
            return ONE_F
        return _and(mso.Leq(phi.left, phi.right), mso.Leq(phi.right, phi.left))
    if isinstance(phi, mso.In):
        if _is_zero(ctx, phi.var):
            return _truth(_has_zero(ctx, phi.set_var))
        return phi
    if isinstance(phi, mso.Truth):
        return phi
    if isinstance(phi, mso.Pos):
        return _truth(not _is_zero(ctx, phi.var))
    if isinstance(phi, mso.First):
        return _truth(_is_zero(ctx, phi.var))
    if isinstance(phi, mso.PosSet):
        return _truth(not _has_zero(ctx, phi.set_var))
    if isinstance(phi, (mso.Empty, mso.Full)):
        X = phi.set_var
        y = mso._fresh({X})
        if isinstance(phi, mso.Empty):
            return _and(_truth(not _has_zero(ctx, X)), _forall(y, _not(mso.In(y, X))))
        return _and(_truth(_has_zero(ctx, X)), _forall(y, mso.In(y, X)))
    if isinstance(phi, mso.Partition):
        Us = phi.set_vars
        zero_ok = sum(1 for U in Us if _has_zero(ctx, U)) == 1
        cover = phi.expand()
        return _and(_truth(zero_ok), _forall(cover.var, to_bmsol(cover.body, {**ctx, cover.var: "pos"})))
    if isinstance(phi, mso.Derived):
        return to_bmsol(phi.expand(), ctx)
    if isinstance(phi, mso.Not):
        return _not(to_bmsol(phi.body, ctx))
    if isinstance(phi, mso.And):
        return _and(*(to_bmsol(p, ctx) for p in phi.parts))
    if isinstance(phi, mso.Or):
        return _or(*(to_bmsol(p, ctx) for p in phi.parts))
    if isinstance(phi, mso.Implies):
        return _not(_and(to_bmsol(phi.left, ctx), _not(to_bmsol(phi.right, ctx))))
    x = phi.var
    if isinstance(phi, (mso.Exists, mso.Forall)):
        at_zero = to_bmsol(phi.body, {**ctx, x: "zero"})
        at_pos = to_bmsol(phi.body, {**ctx, x: "pos"})
        if isinstance(phi, mso.Forall):
            return _and(at_zero, _forall(x, at_pos))
        return _or(at_zero, _not(_forall(x, _not(at_pos))))
    if isinstance(phi, (mso.ExistsSet, mso.ForallSet)):
        with0 = to_bmsol(phi.body, {**ctx, x: True})
        without0 = to_bmsol(phi.body, {**ctx, x: False})
        if isinstance(phi, mso.ForallSet):
            return _forallset(x, _and(with0, without0))
        return _not(_forallset(x, _and(_not(with0), _not(without0))))
    raise TypeError(f"not an MSO formula: {phi!r}")


def _is_zero(ctx, x) -> bool:
    return ctx.get(x) == "zero"


def _has_zero(ctx, X) -> bool:
    return ctx.get(X, False) is True


# Smart constructors for bMSOL.  Values are 0/1, so double negation and the
# usual truth-constant laws are sound.  Only ``forall x. true`` is folded for
# element quantifiers: ``forall x. false`` is one on the empty word, and
# likewise a vacuous ``forall x`` cannot be dropped.

def _truth(b) -> mso.Truth:
    return ONE_F if b else ZERO_F


def _is_truth(p, value) -> bool:
    return (isinstance(p, mso.Truth) and p.value is value) or \
        (isinstance(p, wmsol.Const) and p.value is value)


def _not(p):
    if isinstance(p, (mso.Truth, wmsol.Const)) and isinstance(p.value, bool):
        return _truth(not p.value)
    if isinstance(p, wmsol.Not):
        return p.body
    return wmsol.Not(p)


def _and(*parts):
    flat = []
    for p in parts:
        if _is_truth(p, False):
            return ZERO_F
        if _is_truth(p, True):
            continue
        flat.extend(p.parts if isinstance(p, wmsol.And) else (p,))
    if not flat:
        return ONE_F
    return flat[0] if len(flat) == 1 else wmsol.And(tuple(flat))


def _forall(x, body):
    return ONE_F if _is_truth(body, True) else wmsol.Forall(x, body)


def _forallset(X, body):
    # there is always at least one set, and a 0/1 value is idempotent
    if isinstance(body, mso.Truth) or X not in wmsol.free_vars(body)[1]:
        return body
    return wmsol.ForallSet(X, body)


def _or(*parts):
    """Boolean disjunction inside bMSOL: ``not (not a and not b ...)``."""
    return _not(_and(*(_not(p) for p in parts)))


def msoleval_to_rmsol(t: Term, S: Semiring, report: TranslationReport | None = None):
    """RMSOL formula with the same value as the ground term ``t`` on every word."""
    if report is None:
        report = TranslationReport(t, None)
    return _back(t, {}, S, report)


def translate_term(t: Term, S: Semiring) -> TranslationReport:
    report = TranslationReport(t, None)
    report.result = msoleval_to_rmsol(t, S, report)
    report.certificate = wmsol.classify(report.result, S)
    return report


def _weight(base, S: Semiring):
    if isinstance(base, Ind):
        if base.name in S.gens:
            return Poly.generator(S.gens, base.name)
        raise NotGroundError(f"indeterminate {base.name} has no value in {S.name}")
    try:
        return _literal(S.coerce(base), S)
    except TypeError:
        raise NotGroundError(f"{base!r} is not an element of {S.name}") from None


def _back(t, ctx, S, report):
    if isinstance(t, Const):
        return wmsol.Const(_weight(t.value, S))
    if isinstance(t, StdMonomial):
        return _back_monomials([t], ctx, S, report)
    if isinstance(t, Product):
        monomials = [f for f in t.factors if isinstance(f, StdMonomial)]
        others = [f for f in t.factors if not isinstance(f, StdMonomial)]
        parts = []
        if len(monomials) > MERGE_LIMIT:
            report.notes.append(f"product of {len(monomials)} monomials kept as a conjunction")
            parts.extend(_back_monomials([m], ctx, S, report) for m in monomials)
        elif monomials:
            if len(monomials) > 1:
                report.notes.append(f"product of {len(monomials)} monomials merged by case split")
            parts.append(_back_monomials(monomials, ctx, S, report))
        parts.extend(_back(f, ctx, S, report) for f in others)
        # weighted products are associative with unit one and absorbing zero
        return _and(*parts)
    if isinstance(t, FoSum):
        v = t.var
        zero_ctx, pos_ctx = {**ctx, v: "zero"}, {**ctx, v: "pos"}
        at_zero = _guarded(to_bmsol(t.guard, zero_ctx), lambda: _back(t.body, zero_ctx, S, report))
        at_pos = _guarded(to_bmsol(t.guard, pos_ctx), lambda: _back(t.body, pos_ctx, S, report))
        if not _is_truth(at_pos, False):
            at_pos = wmsol.Exists(v, at_pos)
        return _sum(at_zero, at_pos)
    if isinstance(t, SetSum):
        cases = []
        for flags in cartesian((True, False), repeat=len(t.vars)):
            sub = {**ctx, **dict(zip(t.vars, flags))}
            phi = _guarded(to_bmsol(t.guard, sub), lambda: _back(t.body, sub, S, report))
            if _is_truth(phi, False):
                continue
            for R in reversed(t.vars):
                phi = wmsol.ExistsSet(R, phi)
            cases.append(phi)
        return _sum(*cases)
    raise TypeError(f"not a term: {t!r}")


def _guarded(guard, body):
    """``guard and body()``, skipping the body when the guard is constant false."""
    if _is_truth(guard, False):
        return wmsol.Const(False)
    if _is_truth(guard, True):
        return body()
    return wmsol.And((guard, body()))


def _sum(*parts):
    parts = [p for p in parts if not _is_truth(p, False)]
    if not parts:
        return wmsol.Const(False)
    return parts[0] if len(parts) == 1 else wmsol.Or(tuple(parts))


def _back_monomials(monomials, ctx, S, report):
    """Product of monomials as (value at 0) and (forall x over a step formula).

    With guards ``phi_i`` and bases ``a_i``, each element contributes the
    product of the ``a_i`` whose guard holds there; the cases are made
    exclusive by listing, for every subset ``C``, which guards hold.
    """
    # a base of one contributes one whatever its guard
    monomials = [m for m in monomials if _weight(m.base, S) is not True]
    if not monomials:
        return wmsol.Const(True)
    avoid = set(ctx)
    for m in monomials:
        avoid |= all_vars(m)
    x = monomials[0].var if len(monomials) == 1 else fresh_name(avoid, "x")
    guards = [rename_free(m.guard, m.var, x) for m in monomials]
    bases = [_weight(m.base, S) for m in monomials]
    at_zero = _case_split([to_bmsol(g, {**ctx, x: "zero"}) for g in guards], bases, S)
    at_pos = _case_split([to_bmsol(g, {**ctx, x: "pos"}) for g in guards], bases, S)
    return _and(at_zero, _forall(x, at_pos))


def _case_split(guards, bases, S):
    """Step formula with one case per consistent choice of guard literals.

    Zero-valued cases are left out (the cases are exclusive, so they add
    nothing) and a case of value one is its literals alone, which keeps
    boolean products such as ``0^{#g}`` inside bMSOL.
    """
    cases = []
    for chosen in cartesian((True, False), repeat=len(guards)):
        lits = [g if c else _not(g) for g, c in zip(guards, chosen)]
        if not wmsol.consistent(lits) or any(_is_truth(g, False) for g in lits):
            continue
        value = S.prod(S.coerce(a) for a, c in zip(bases, chosen) if c)
        if value == S.zero:
            continue
        parts = [g for g in lits if not _is_truth(g, True)]
        if value != S.one:
            parts.append(wmsol.Const(_literal(value, S)))
        if not parts:
            cases.append(ONE_F)
        else:
            cases.append(parts[0] if len(parts) == 1 else wmsol.And(tuple(parts)))
    return _sum(*cases)


def rename_free(phi: mso.Formula, old: str, new: str) -> mso.Formula:
    """Replace free occurrences of the element variable ``old`` by ``new``.

    ``new`` must not occur in ``phi`` (so nothing gets captured).
    """
    if old == new:
        return phi
    if isinstance(phi, (mso.Exists, mso.Forall, mso.ExistsSet, mso.ForallSet)):
        if phi.var == old:
            return phi
        return type(phi)(phi.var, rename_free(phi.body, old, new))
    if isinstance(phi, mso.Not):
        return mso.Not(rename_free(phi.body, old, new))
    if isinstance(phi, (mso.And, mso.Or)):
        return type(phi)(tuple(rename_free(p, old, new) for p in phi.parts))
    if isinstance(phi, mso.Implies):
        return mso.Implies(rename_free(phi.left, old, new), rename_free(phi.right, old, new))
    changes = {}
    for name in ("var", "left", "right"):
        if getattr(phi, name, None) == old:
            changes[name] = new
    if not changes:
        return phi
    return type(phi)(**{**{f: getattr(phi, f) for f in phi.__dataclass_fields__}, **changes})


# ---------------------------------------------------------------------------
# round trips


@dataclass
class RoundtripReport:
    source: Any
    image: Any
    checked: int = 0
    mismatches: list = field(default_factory=list)  # (word, env, source value, image value)

    @property
    def passed(self) -> bool:
        return not self.mismatches


def roundtrip_check(x, corpus_len: int, S: Semiring, alphabet: str = "01") -> RoundtripReport:
    """Translate ``x`` there and back and compare values on every short word.

    ``x`` is a weighted formula (RMSOL to terms and back) or a term.
    """
    if isinstance(x, Term):
        image = rmsol_to_msoleval(msoleval_to_rmsol(x, S), S)
        fo, so = term_free_vars(x)
        source_fn = compile_term(x, S)
        image_fn = compile_term(image, S)
    else:
        image = msoleval_to_rmsol(rmsol_to_msoleval(x, S), S)
        fo, so = wmsol.free_vars(x)
        source_fn = wmsol.compile_weighted(x, S)
        image_fn = wmsol.compile_weighted(image, S)
    report = RoundtripReport(x, image)
    for w in enumerate_words(alphabet, corpus_len):
        s = word_to_structure(w)
        for env in wmsol.position_assignments(s, fo, so):
            a, b = source_fn(s, dict(env)), image_fn(s, dict(env))
            report.checked += 1
            if a != b:
                report.mismatches.append((str(w), env, a, b))
    return report
