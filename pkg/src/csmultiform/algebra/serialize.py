"""Deterministic text form of expressions and forms, with a parser.

Expressions::

    B[1,2]^2 - 2/3*B[1,3]*B[3,2] + B[1,2;3]*eta[2,1]

Forms are one header line followed by one line per nonzero term, in
sorted key order::

    MatrixForm window=[1,2,3]
    E[1,2] dxi[1] : B[1,2]
    ScalarForm window=[1,2,3]
    dxi[1,2,3] : 2*B[1,2]*B[2,3]*B[3,1] - ...

``parse_*(format_*(x)) == x`` for every canonical value.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import atoms
from .forms import MatrixForm, ScalarForm, word_indices, word_mask
from .scalar import ScalarExpr


def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _format_monomial(m: tuple) -> str:
    parts = []
    i = 0
    while i < len(m):
        a = m[i]
        k = m.count(a)
        s = atoms.atom_str(a)
        parts.append(f"{s}^{k}" if k > 1 else s)
        i += k
    return "*".join(parts)


def format_expr(e: ScalarExpr) -> str:
    items = e.sorted_items()
    if not items:
        return "0"
    out = []
    for idx, (m, c) in enumerate(items):
        neg = c < 0
        mag = -c if neg else c
        body = _format_monomial(m)
        if not body:
            text = _format_coeff(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_format_coeff(mag)}*{body}"
        if idx == 0:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<atom>(?P<name>[A-Za-z]+)\[(?P<args>[0-9,;\s]*)\])|(?P<op>[-+*/^]))"
)


class ParseError(ValueError):
    pass


def _tokens(text: str):
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 20]!r}")
        pos = mt.end()
        if mt.group("num"):
            yield "num", int(mt.group("num"))
        elif mt.group("atom"):
            yield "atom", _parse_atom(mt.group("name"), mt.group("args"))
        else:
            yield "op", mt.group("op")


def _parse_atom(name: str, args: str) -> int:
    if name not in atoms.KIND_BY_NAME:
        raise ParseError(f"unknown atom kind {name!r}")
    head, _, tail = args.partition(";")
    rc = [int(x) for x in head.split(",") if x.strip()]
    if len(rc) != 2:
        raise ParseError(f"atom {name}[{args}] needs row,col")
    derivs = tuple(int(x) for x in tail.split(",") if x.strip())
    return atoms.encode(atoms.KIND_BY_NAME[name], rc[0], rc[1], derivs)


def parse_expr(text: str) -> ScalarExpr:
    if text.strip() == "0":
        return ScalarExpr()
    toks = list(_tokens(text))
    pos = 0
    acc: dict = {}

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    sign = 1
    expect_term = True
    while pos < len(toks):
        kind, val = peek()
        if kind == "op" and val in "+-" and expect_term:
            sign = -sign if val == "-" else sign
            pos += 1
            continue
        coeff = Fraction(1)
        mono: list[int] = []
        while True:
            kind, val = peek()
            if kind == "num":
                pos += 1
                num = Fraction(val)
                if peek() == ("op", "/"):
                    pos += 1
                    k2, den = peek()
                    if k2 != "num":
                        raise ParseError("expected denominator")
                    pos += 1
                    num /= den
                coeff *= num
            elif kind == "atom":
                pos += 1
                power = 1
                if peek() == ("op", "^"):
                    pos += 1
                    k2, power = peek()
                    if k2 != "num":
                        raise ParseError("expected exponent")
                    pos += 1
                mono.extend([val] * power)
            else:
                raise ParseError(f"expected factor, got {val!r}")
            if peek() == ("op", "*"):
                pos += 1
                continue
            break
        m = tuple(sorted(mono))
        acc[m] = acc.get(m, 0) + sign * coeff
        sign = 1
        kind, val = peek()
        if kind is None:
            break
        if kind != "op" or val not in "+-":
            raise ParseError(f"expected + or -, got {val!r}")
        sign = -1 if val == "-" else 1
        pos += 1
        expect_term = False
    return ScalarExpr(acc)


def _format_word(mask: int) -> str:
    return "dxi[" + ",".join(map(str, word_indices(mask))) + "]"


def format_form(f) -> str:
    head = f"{type(f).__name__} window=[{','.join(map(str, f.window))}]"
    lines = [head]
    if isinstance(f, MatrixForm):
        for key in sorted(f.terms, key=lambda k: (k[0], k[1], word_indices(k[2]))):
            r, c, w = key
            lines.append(f"E[{r},{c}] {_format_word(w)} : {format_expr(ScalarExpr._wrap(dict(f.terms[key])))}")
    else:
        for w in sorted(f.terms, key=word_indices):
            lines.append(f"{_format_word(w)} : {format_expr(ScalarExpr._wrap(dict(f.terms[w])))}")
    return "\n".join(lines)


_HEAD = re.compile(r"^(MatrixForm|ScalarForm) window=\[([0-9,]*)\]$")
_MLINE = re.compile(r"^E\[(\d+),(\d+)\] dxi\[([0-9,]*)\] : (.*)$")
_SLINE = re.compile(r"^dxi\[([0-9,]*)\] : (.*)$")


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def parse_form(text: str):
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    mh = _HEAD.match(lines[0].strip()) if lines else None
    if not mh:
        raise ParseError("missing form header")
    window = _ints(mh.group(2))
    terms: dict = {}
    for ln in lines[1:]:
        ln = ln.strip()
        if mh.group(1) == "MatrixForm":
            ml = _MLINE.match(ln)
            if not ml:
                raise ParseError(f"bad matrix-form line: {ln!r}")
            sign, mask = word_mask(_ints(ml.group(3)))
            key = (int(ml.group(1)), int(ml.group(2)), mask)
            expr = parse_expr(ml.group(4))
        else:
            ml = _SLINE.match(ln)
            if not ml:
                raise ParseError(f"bad scalar-form line: {ln!r}")
            sign, mask = word_mask(_ints(ml.group(1)))
            key = mask
            expr = parse_expr(ml.group(2))
        if sign != 1:
            raise ParseError(f"word must be strictly increasing: {ln!r}")
        if key in terms:
            raise ParseError(f"duplicate term: {ln!r}")
        terms[key] = dict(expr.terms)
    cls = MatrixForm if mh.group(1) == "MatrixForm" else ScalarForm
    return cls(window, terms)
