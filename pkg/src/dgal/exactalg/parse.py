"""Recursive-descent parser for the expression grammar.

Grammar: sums and differences of products and quotients of powers; integer
exponents (optionally negative); parentheses; integer literals, so ``3/4``
parses as the rational three quarters.
"""

from __future__ import annotations

import re
from typing import Callable

from .ratfunc import RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


class ExprSyntaxError(ValueError):
    """The text does not match the expression grammar."""


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r} at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", num))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, resolve):
        self.toks = tokens
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise ExprSyntaxError(f"expected {value or 'token'}, got {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self) -> RatFunc:
        v = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self) -> RatFunc:
        v = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                v = v * rhs
            else:
                if not rhs:
                    raise ExprSyntaxError("division by zero")
                v = v / rhs
        return v

    def unary(self) -> RatFunc:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            while self.peek() in (("op", "-"), ("op", "+")):
                if self.take()[1] == "-":
                    sign = -sign
            if self.peek() == ("op", "("):
                self.take()
                e = self.expr()
                self.take(")")
                if not e.is_constant() or e.constant_value().denominator != 1:
                    raise ExprSyntaxError("exponent must be an integer")
                n = int(e.constant_value())
            else:
                kind, text = self.take()
                if kind != "num":
                    raise ExprSyntaxError("exponent must be an integer")
                n = int(text)
            n *= sign
            if n < 0 and not base:
                raise ExprSyntaxError("negative power of zero")
            return base ** n
        return base

    def atom(self) -> RatFunc:
        kind, text = self.peek()
        if kind == "num":
            self.take()
            return RatFunc.const(int(text))
        if kind == "name":
            self.take()
            return RatFunc.var(self.resolve(text))
        if (kind, text) == ("op", "("):
            self.take()
            v = self.expr()
            self.take(")")
            return v
        raise ExprSyntaxError("unexpected end of expression" if text is None else f"unexpected token {text!r}")


def parse(text: str, resolve: Callable[[str], str] | None = None) -> RatFunc:
    """Parse ``text`` into a canonical :class:`RatFunc`.

    ``resolve`` maps each identifier to its canonical variable name and may
    raise ``ValueError`` for names outside the accepted lexicon.
    """
    toks = _tokenize(text)
    if not toks:
        raise ExprSyntaxError("empty expression")
    p = _Parser(toks, resolve or (lambda s: s))
    v = p.expr()
    if p.i != len(toks):
        raise ExprSyntaxError(f"trailing input {p.peek()[1]!r}")
    return v
