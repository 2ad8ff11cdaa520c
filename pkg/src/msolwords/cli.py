"""Command-line front end.

Inputs are files whose first line is ``formalism: <kind>`` (automaton files
use the ``.wa`` header block) or inline text.  ``eval`` and ``translate``
take the formalism as an argument; elsewhere inline inputs are written
``kind:expression``.  Built-in word functions are available as
``builtin:count-ones``, ``builtin:sq`` and ``builtin:const=<c>``.

Exit codes: 0 ok, 1 mismatch, 2 parse error, 3 evaluation error,
4 Hankel rank not saturated, 5 fragment violation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from typing import Any

from . import automata, msoleval, translate, wmsol
from .errors import (FragmentError, MsolwordsError, ParseError, RankNotSaturated)
from .semiring import SAMPLES, Semiring, check_semiring_laws, get_semiring
from .words import DEFAULT_ALPHABET, enumerate_words

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_EVAL, EXIT_RANK, EXIT_FRAGMENT = range(6)

FORMALISMS = ("wmsol", "msoleval", "automaton", "builtin")


@dataclass
class Loaded:
    """A parsed input: its formalism and object."""
    kind: str
    obj: Any
    label: str


def _read_source(text: str):
    """``(header kind or None, body)`` for a file's contents."""
    lines = text.splitlines()
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith(";") or stripped.startswith("#"):
            continue
        if stripped.startswith("formalism:"):
            kind = stripped.split(":", 1)[1].strip()
            if kind == "automaton":
                return kind, text
            return kind, "\n".join(lines[i + 1:])
        return None, text
    return None, text


def load_input(source: str, S: Semiring, kind: str | None = None) -> Loaded:
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            header, body = _read_source(fh.read())
        if header is None and kind is None:
            raise ParseError(f"{source}: missing 'formalism:' header")
        if header is not None and kind is not None and header != kind:
            raise ParseError(f"{source}: file declares formalism {header}, expected {kind}")
        kind = kind or header
        label = source
    else:
        body, label = source, source
        if kind is None:
            prefix, sep, rest = source.partition(":")
            if not sep or prefix not in FORMALISMS:
                raise ParseError(f"inline input needs a 'kind:' prefix ({', '.join(FORMALISMS)})")
            kind, body = prefix, rest
    if kind == "wmsol":
        return Loaded(kind, wmsol.parse_wformula(body, S), label)
    if kind == "msoleval":
        return Loaded(kind, msoleval.parse_term(body, S), label)
    if kind == "automaton":
        return Loaded(kind, automata.read_automaton(body, S), label)
    if kind == "builtin":
        return Loaded(kind, _builtin(body.strip(), S), label)
    raise ParseError(f"unknown formalism {kind!r}")


def _builtin(name: str, S: Semiring):
    if name == "count-ones":
        return lambda w: S.from_nat(automata.count_ones_fn(w))
    if name == "sq":
        return lambda w: S.from_nat(automata.sq_fn(w))
    if name.startswith("const="):
        c = S.parse(name.split("=", 1)[1])
        return automata.const_fn(c)
    raise ParseError(f"unknown builtin {name!r} (count-ones, sq, const=<c>)")


def parse_assignment(items) -> dict:
    """``x=2`` for elements, ``X={1,3}`` for sets."""
    env: dict = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"bad assignment {item!r}")
        value = value.strip()
        try:
            if value.startswith("{"):
                inner = value.strip("{}").strip()
                env[name.strip()] = frozenset(int(v) for v in inner.split(",") if v.strip())
            else:
                env[name.strip()] = int(value)
        except ValueError:
            raise ParseError(f"bad assignment {item!r}") from None
    return env


def evaluator(x: Loaded, S: Semiring, sigma=None):
    """A function ``word -> value`` for any loaded input."""
    if x.kind == "wmsol":
        return lambda w: wmsol.we_eval(x.obj, w, sigma, S)
    if x.kind == "msoleval":
        return lambda w: msoleval.eval_term(x.obj, w, sigma, S)
    if x.kind == "automaton":
        return lambda w: automata.run(x.obj, w)
    return x.obj


def _show(S: Semiring, value) -> str:
    return S.show(value)


def _emit(args, text_lines, summary):
    if args.format == "json":
        print(json.dumps(summary, sort_keys=True, default=str))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_eval(args, S):
    x = load_input(args.input, S, args.formalism)
    sigma = parse_assignment(args.assign)
    value = evaluator(x, S, sigma)(args.word)
    _emit(args, [_show(S, value)], {"command": "eval", "word": args.word,
                                    "semiring": S.name, "value": _show(S, value)})
    return EXIT_OK


def cmd_translate(args, S):
    x = load_input(args.input, S, args.formalism)
    if args.to == "msoleval":
        if x.kind != "wmsol":
            raise ParseError("translation to msoleval expects a wmsol input")
        report = translate.translate_rmsol(x.obj, S)
        text = msoleval.to_sexpr(report.result, S)
    else:
        if x.kind == "automaton":
            term = automata.automaton_to_msoleval(x.obj)
        elif x.kind == "msoleval":
            term = x.obj
        else:
            raise ParseError("translation to rmsol expects a msoleval or automaton input")
        report = translate.translate_term(term, S)
        text = wmsol.render(report.result, S)
    lines = [text]
    if args.verbose:
        lines += [f"; guard: {g}" for g in report.guards] + [f"; note: {n}" for n in report.notes]
    _emit(args, lines, {"command": "translate", "to": args.to, "semiring": S.name,
                        "result": text, "guards": report.guards, "notes": report.notes})
    return EXIT_OK


def cmd_compile(args, S):
    x = load_input(args.input, S, args.source)
    term = automata.automaton_to_msoleval(x.obj)
    text = msoleval.to_sexpr(term, S)
    _emit(args, [text], {"command": "compile", "semiring": S.name, "result": text})
    return EXIT_OK


def cmd_equiv(args, S):
    left = load_input(args.left, S)
    if args.right is None:
        if left.kind == "wmsol":
            right = Loaded("msoleval", translate.rmsol_to_msoleval(left.obj, S), "translation")
        elif left.kind == "msoleval":
            right = Loaded("wmsol", translate.msoleval_to_rmsol(left.obj, S), "translation")
        elif left.kind == "automaton":
            right = Loaded("msoleval", automata.automaton_to_msoleval(left.obj), "translation")
        else:
            raise ParseError("a builtin has no translation; give two inputs")
    else:
        right = load_input(args.right, S)
    f, g = evaluator(left, S), evaluator(right, S)
    checked, witness = 0, None
    for w in enumerate_words(args.alphabet, args.max_len):
        a, b = f(w), g(w)
        checked += 1
        if a != b:
            witness = (str(w), a, b)
            break
    if witness is None:
        lines = [f"equal on all {checked} words of length <= {args.max_len}"]
    else:
        w, a, b = witness
        lines = [f"differ on {w!r}: {_show(S, a)} vs {_show(S, b)}"]
    summary = {"command": "equiv", "semiring": S.name, "checked": checked, "equal": witness is None,
               "max_len": args.max_len,
               "counterexample": None if witness is None else witness[0]}
    _emit(args, lines, summary)
    return EXIT_OK if witness is None else EXIT_MISMATCH


def cmd_hankel(args, S):
    f = evaluator(load_input(args.input, S), S)
    ranks = automata.hankel_ranks(f, args.max_len, args.alphabet, S)
    lines = ["length rank"] + [f"{n} {r}" for n, r in enumerate(ranks)]
    _emit(args, lines, {"command": "hankel", "semiring": S.name, "ranks": ranks})
    return EXIT_OK


def cmd_learn(args, S):
    f = evaluator(load_input(args.input, S), S)
    verify = args.basis_len + 2 if args.max_len is None else args.max_len
    A = automata.learn_automaton(f, args.basis_len, args.alphabet, S, verify_len=verify)
    text = automata.write_automaton(A)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    lines = ([] if args.output else [text.rstrip("\n")]) + \
        [f"size {A.size}; agrees on all words of length <= {verify}"]
    _emit(args, lines, {"command": "learn", "size": A.size, "verified_len": verify,
                        "automaton": text})
    return EXIT_OK


def cmd_check(args, S):
    if args.what == "semiring-laws":
        rng = random.Random(args.seed)
        samples = list(SAMPLES.get(S.name, [S.zero, S.one]))
        extra = [S.from_nat(rng.randint(0, 9)) for _ in range(3)]
        report = check_semiring_laws(S, samples + extra)
        lines = report.lines()
        summary = {"command": "check", "what": args.what, "semiring": S.name, "seed": args.seed,
                   "checked": report.checked, "passed": report.passed}
        _emit(args, lines, summary)
        return EXIT_OK if report.passed else EXIT_MISMATCH
    if args.input is None:
        raise ParseError(f"check {args.what} needs an input")
    source = args.input
    if source.startswith("wmsol:") and not os.path.isfile(source):
        source = source[len("wmsol:"):]
    x = load_input(source, S, "wmsol")
    if args.what == "fragments":
        cls = wmsol.classify(x.obj, S)
        bad = wmsol.rmsol_violation(x.obj, S)
        lines = [f"{name}: {'yes' if getattr(cls, 'is_' + name) else 'no'}"
                 for name in ("bmsol", "step", "rmsol", "full")]
        if bad is not None:
            lines.append(f"outside rmsol at: {wmsol.to_sexpr(bad, S)}")
        _emit(args, lines, {"command": "check", "what": args.what, **cls.__dict__})
        return EXIT_OK
    report = wmsol.bmsol_boolean_check(x.obj, args.max_len, S, args.alphabet)
    lines = [f"{report.checked} evaluations, {len(report.failures)} failures"]
    lines += [f"  {w!r} {env}: weighted {_show(S, v)}, classical {t}" for w, env, v, t in report.failures[:10]]
    _emit(args, lines, {"command": "check", "what": args.what, "checked": report.checked,
                        "failures": len(report.failures)})
    return EXIT_OK if report.passed else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--semiring", default="rat",
                        help="bool, nat, int, rat, trop-min, trop-max or poly(X,...)")
    common.add_argument("--max-len", type=int, default=None, help="longest word to check")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--alphabet", default=DEFAULT_ALPHABET)

    parser = argparse.ArgumentParser(prog="msolwords", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate on one word")
    p.add_argument("formalism", choices=FORMALISMS)
    p.add_argument("input")
    p.add_argument("--word", default="")
    p.add_argument("--assign", action="append", metavar="VAR=VALUE")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("translate", parents=[common], help="translate between formalisms")
    p.add_argument("formalism", choices=("wmsol", "msoleval", "automaton"))
    p.add_argument("input")
    p.add_argument("--to", choices=("msoleval", "rmsol"), required=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("compile", parents=[common], help="compile an automaton to a term")
    p.add_argument("input")
    p.add_argument("--from", dest="source", choices=("automaton",), default="automaton")
    p.add_argument("--to", choices=("msoleval",), default="msoleval")
    p.set_defaults(run=cmd_compile)

    p = sub.add_parser("equiv", parents=[common], help="compare two inputs on all short words")
    p.add_argument("left")
    p.add_argument("right", nargs="?", help="omit to compare the input with its translation")
    p.set_defaults(run=cmd_equiv, default_len=4)

    p = sub.add_parser("hankel", parents=[common], help="Hankel ranks per truncation length")
    p.add_argument("input")
    p.set_defaults(run=cmd_hankel, default_len=3)

    p = sub.add_parser("learn", parents=[common], help="learn an automaton from Hankel data")
    p.add_argument("input")
    p.add_argument("--basis-len", type=int, default=2)
    p.add_argument("--output", "-o")
    p.set_defaults(run=cmd_learn)

    p = sub.add_parser("check", parents=[common], help="semiring laws, fragments, bMSOL collapse")
    p.add_argument("what", choices=("semiring-laws", "fragments", "bmsol"))
    p.add_argument("input", nargs="?")
    p.set_defaults(run=cmd_check, default_len=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_len is None and hasattr(args, "default_len"):
        args.max_len = args.default_len
    try:
        S = get_semiring(args.semiring)
        return args.run(args, S)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RankNotSaturated as exc:
        print(f"rank not saturated: {exc}", file=sys.stderr)
        return EXIT_RANK
    except FragmentError as exc:
        print(f"fragment error: {exc}", file=sys.stderr)
        return EXIT_FRAGMENT
    except MsolwordsError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
