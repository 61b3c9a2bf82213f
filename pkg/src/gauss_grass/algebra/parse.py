"""Recursive-descent parser for the ASCII expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)?
    atom   := INT | IDENT | '(' expr ')'

Identifiers match ``[A-Za-z][A-Za-z0-9_]*``.  Multiplication must be
written out: ``2*z1`` parses, ``2z1`` is a syntax error.  ``/`` is accepted
by :func:`ratfunc_parse` for any nonzero divisor and by :func:`poly_parse`
only for nonzero constant divisors (so printed rational coefficients such
as ``3/2*z1`` read back).
"""

from __future__ import annotations

import re
from typing import Sequence

from gauss_grass.algebra.field import FieldSpec
from gauss_grass.algebra.poly import MultiPoly, RatFunc, Ring
from gauss_grass.errors import DivisionByZeroError, ParseError, UnknownParameterError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "num" and not value.isdigit():
            raise ParseError(f"non-integer literal {value!r}", text, pos)
        if kind != "ws":
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring, allow_division: bool):
        self.text = text
        self.ring = ring
        self.allow_division = allow_division
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def error(self, message: str, pos: int | None = None) -> ParseError:
        return ParseError(message, self.text, self.peek()[2] if pos is None else pos)

    def expect_op(self, op: str) -> None:
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            got = "end of input" if kind == "end" else repr(value)
            raise self.error(f"expected {op!r}, got {got}")
        self.i += 1

    def parse(self) -> RatFunc:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        value = self.expr()
        kind, token, pos = self.peek()
        if kind != "end":
            if kind in ("ident", "num") or token == "(":
                raise self.error("implicit multiplication is not allowed (write '*')")
            raise self.error(f"unexpected {token!r}")
        return value

    def expr(self) -> RatFunc:
        value = self.term()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "+-":
                self.i += 1
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self) -> RatFunc:
        value = self.unary()
        while True:
            kind, op, pos = self.peek()
            if kind == "op" and op in "*/":
                self.i += 1
                rhs = self.unary()
                if op == "*":
                    value = value * rhs
                    continue
                if rhs.is_zero():
                    raise ParseError("division by zero", self.text, pos)
                if not self.allow_division and not rhs.is_constant():
                    raise ParseError("division by a non-constant in a polynomial", self.text, pos)
                value = value / rhs
            else:
                return value

    def unary(self) -> RatFunc:
        kind, op, _ = self.peek()
        if kind == "op" and op == "-":
            self.i += 1
            return -self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        kind, op, _ = self.peek()
        if kind == "op" and op == "^":
            self.i += 1
            kind, value, pos = self.peek()
            if kind != "num":
                raise self.error("exponent must be a non-negative integer literal")
            self.i += 1
            base = base ** int(value)
            kind, op, pos = self.peek()
            if kind == "op" and op == "^":
                raise self.error("chained '^' is ambiguous; use parentheses")
        return base

    def atom(self) -> RatFunc:
        kind, value, pos = self.peek()
        if kind == "num":
            self.i += 1
            return self.ring.rat(int(value))
        if kind == "ident":
            self.i += 1
            if value not in self.ring.params:
                raise UnknownParameterError(f"unknown parameter {value!r}", self.text, pos)
            return self.ring.rat_gen(value)
        if kind == "op" and value == "(":
            self.i += 1
            inner = self.expr()
            self.expect_op(")")
            return inner
        if kind == "end":
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {value!r}")


def _ring(params: Sequence[str] | Ring, field: FieldSpec | None) -> Ring:
    if isinstance(params, Ring):
        return params
    return Ring(tuple(params), field or FieldSpec.rationals())


def ratfunc_parse(text: str, params: Sequence[str] | Ring, field: FieldSpec | None = None) -> RatFunc:
    """Parse a rational expression over ``field`` in the named parameters."""
    ring = _ring(params, field)
    try:
        return _Parser(text, ring, allow_division=True).parse()
    except DivisionByZeroError as exc:
        raise ParseError(f"division by zero ({exc})", text, None) from exc


def poly_parse(text: str, params: Sequence[str] | Ring, field: FieldSpec | None = None) -> MultiPoly:
    """Parse a polynomial expression; see the module docstring for the grammar."""
    ring = _ring(params, field)
    # Only constant divisors are admitted, so the canonical denominator is 1.
    return _Parser(text, ring, allow_division=False).parse().numerator
