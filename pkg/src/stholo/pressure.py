"""Pressure laws given as rational functions of ``v``.

A spec string such as ``"1/v"`` or ``"(1 + v^2) / (2*v^3)"`` is parsed by a
small recursive-descent parser into a numerator/denominator pair of real
polynomials. The derivative follows from the quotient rule and the
singular set is the root set of the denominator.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['+' | '-'] INT)?
    atom   := NUMBER | 'v' | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .core import DEFAULT_TOL, PressureLaw, inv_v

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|(v)|(\*\*|[-+*/^()]))")


class PressureSpecError(ValueError):
    pass


@dataclass(frozen=True)
class Rational:
    num: Polynomial
    den: Polynomial

    def __add__(self, o):
        return Rational(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, o):
        return Rational(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, o):
        return Rational(self.num * o.num, self.den * o.den)

    def __truediv__(self, o):
        if not np.any(o.num.coef):
            raise PressureSpecError("division by the zero polynomial")
        return Rational(self.num * o.den, self.den * o.num)

    def __neg__(self):
        return Rational(-self.num, self.den)

    def __pow__(self, n: int):
        if n < 0:
            return Rational(self.den ** -n, self.num ** -n)
        return Rational(self.num ** n, self.den ** n)


def _const(c: float) -> Rational:
    return Rational(Polynomial([c]), Polynomial([1.0]))


_V = Rational(Polynomial([0.0, 1.0]), Polynomial([1.0]))


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PressureSpecError(f"unexpected character at {pos}: {text[pos:]!r}")
        num, var, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif var is not None:
            tokens.append(("v", var))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        if self.take() != ("op", op):
            raise PressureSpecError(f"expected {op!r}")

    def parse(self) -> Rational:
        if not self.tokens:
            raise PressureSpecError("empty pressure law")
        r = self.expr()
        if self.i != len(self.tokens):
            raise PressureSpecError(f"trailing input at token {self.i}")
        return r

    def expr(self):
        r = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            r = r + self.term() if op == "+" else r - self.term()
        return r

    def term(self):
        r = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            r = r * self.unary() if op == "*" else r / self.unary()
        return r

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() in (("op", "+"), ("op", "-")):
                sign = -1 if self.take()[1] == "-" else 1
            kind, text = self.take()
            if kind != "num" or not text.isdigit():
                raise PressureSpecError("exponent must be an integer literal")
            base = base ** (sign * int(text))
        return base

    def atom(self):
        kind, text = self.take()
        if kind == "num":
            return _const(float(text))
        if kind == "v":
            return _V
        if (kind, text) == ("op", "("):
            r = self.expr()
            self.expect(")")
            return r
        raise PressureSpecError(f"unexpected token {text!r}")


def parse_rational(text: str) -> Rational:
    return _Parser(text).parse()


def _trim(p: Polynomial) -> Polynomial:
    coef = np.trim_zeros(np.asarray(p.coef, dtype=float), "b")
    return Polynomial(coef if coef.size else [0.0])


def _horner(poly: Polynomial):
    # plain-float Horner: numpy scalar dispatch is several times slower in the integrator loop
    coef = [float(c) for c in reversed(poly.coef)]

    def f(v):
        acc = 0.0
        for c in coef:
            acc = acc * v + c
        return acc

    return f


def rational_law(text: str, guard: float = DEFAULT_TOL.guard) -> PressureLaw:
    """Build a :class:`PressureLaw` from a rational-function spec string."""
    r = parse_rational(text)
    num, den = _trim(r.num), _trim(r.den)
    dnum, dden = num.deriv(), den.deriv()
    roots = tuple(complex(z) for z in den.roots()) if den.degree() > 0 else ()

    n, d_, dn, dd = (_horner(q) for q in (num, den, dnum, dden))

    def p(v):
        return n(v) / d_(v)

    def dp(v):
        d = d_(v)
        return (dn(v) * d - n(v) * dd(v)) / (d * d)

    return PressureLaw(p=p, dp=dp, name=text.strip(), singularities=roots, guard=guard)


BUILTIN_LAWS = {"inv_v": inv_v}


def resolve_law(spec: str) -> PressureLaw:
    """A built-in law by name, or a rational-function spec string."""
    if spec in BUILTIN_LAWS:
        return BUILTIN_LAWS[spec]()
    return rational_law(spec)
