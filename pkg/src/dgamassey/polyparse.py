"""Text form of algebra elements: ``"x1*x4 + x2*x3"``, ``"-3/7 x2^2*x5"``."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^−]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", 1, col)
        kind = m.lastgroup
        val = m.group(kind)
        if val == "−":
            val = "-"
        out.append((kind, val, m.start(kind) + 1))
        pos = m.end()
    return out


def parse_terms(algebra, text: str) -> dict:
    """Parse into a raw ``{monomial: coefficient}`` dict (homogeneity unchecked)."""
    return _parse(algebra, text)[0]


def _parse(algebra, text: str):
    """Terms plus the written degrees of the terms with nonzero coefficient;
    the latter types expressions such as ``x^2`` that vanish in the algebra."""
    from .algebra import add_terms, mul_terms

    f = algebra.field
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial", 1, 1)
    total: dict = {}
    written = set()
    i = 0
    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-', got {toks[i][1]!r}", 1, toks[i][2])
        first = False
        if i >= len(toks):
            raise ParseError("dangling sign", 1, len(text))
        coeff = Fraction(sign)
        term = {algebra.unit_monomial: f.one}
        tdeg = 0
        saw_factor = False
        while i < len(toks) and not (toks[i][0] == "op" and toks[i][1] in "+-"):
            kind, val, col = toks[i]
            if kind == "op" and val == "*":
                if not saw_factor:
                    raise ParseError("'*' without a left operand", 1, col)
                i += 1
                if i >= len(toks) or toks[i][0] == "op":
                    raise ParseError("'*' without a right operand", 1, col)
                continue
            if kind == "num":
                coeff *= Fraction(val)
                i += 1
            elif kind == "name":
                try:
                    g = algebra.generator_index(val)
                except KeyError:
                    raise ParseError(f"unknown generator {val!r}", 1, col) from None
                power = 1
                i += 1
                if i < len(toks) and toks[i][1] == "^":
                    if i + 1 >= len(toks) or toks[i + 1][0] != "num" or "/" in toks[i + 1][1]:
                        raise ParseError("exponent must be a positive integer", 1, toks[i][2])
                    power = int(toks[i + 1][1])
                    if power < 1:
                        raise ParseError("exponent must be a positive integer", 1, toks[i][2])
                    i += 2
                tdeg += power * algebra.generators[g].degree
                gm = {algebra.generator_monomial(g): f.one}
                for _ in range(power):
                    term = mul_terms(algebra, term, gm)
            else:
                raise ParseError(f"unexpected {val!r}", 1, col)
            saw_factor = True
        if not saw_factor:
            raise ParseError("empty term", 1, toks[min(i, len(toks) - 1)][2])
        try:
            c = f(coeff)
        except ZeroDivisionError as exc:
            raise ParseError(str(exc), 1, 1) from None
        if c != 0:
            written.add(tdeg)
        total = add_terms(total, term, c)
    return total, written


def parse_polynomial(algebra, text: str, degree=None):
    """Parse a homogeneous element.  ``degree`` is required to type a zero."""
    from .algebra import GradedVector

    terms, written = _parse(algebra, text)
    degs = {algebra.monomial_degree(m) for m in terms}
    if len(degs) > 1:
        raise ParseError(f"polynomial {text!r} is not homogeneous", 1, 1)
    if degs:
        d = degs.pop()
        if degree is not None and d != degree:
            raise ParseError(f"polynomial {text!r} has degree {d}, expected {degree}", 1, 1)
    elif degree is not None:
        d = degree
    elif len(written) == 1:
        d = written.pop()
    else:
        d = 0
    return GradedVector(algebra, d, terms)


def format_scalar_inline(field, c) -> str:
    if field.is_finite:
        return str(c.v)
    return str(c)


def format_terms(algebra, terms) -> str:
    """Render ``(monomial, coeff)`` pairs (already ordered)."""
    f = algebra.field
    parts = []
    for m, c in terms:
        neg = False
        if not f.is_finite and c < 0:
            neg, c = True, -c
        mono = algebra.format_monomial(m)
        cs = format_scalar_inline(f, c)
        if mono == "1":
            body = cs
        elif cs == "1":
            body = mono
        else:
            body = f"{cs}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts) if parts else "0"


def format_polynomial(vector) -> str:
    return format_terms(vector.algebra, vector.terms)
