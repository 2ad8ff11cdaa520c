"""Minimal S-expression reader/writer used by every concrete syntax."""

from __future__ import annotations

import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s()]+))")


def tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        comment, lp, rp, atom = m.groups()
        if comment:
            continue
        if lp:
            out.append("(")
        elif rp:
            out.append(")")
        elif atom:
            out.append(atom)
    return out


def read(text: str):
    """Parse exactly one S-expression into nested lists of atom strings."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    expr, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"trailing tokens after expression: {' '.join(tokens[pos:pos + 5])}")
    return expr


def _read(tokens, pos):
    tok = tokens[pos]
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[pos] == ")":
            return items, pos + 1
        item, pos = _read(tokens, pos)
        items.append(item)


def write(expr) -> str:
    if isinstance(expr, list):
        return "(" + " ".join(write(e) for e in expr) + ")"
    return str(expr)
