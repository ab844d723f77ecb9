"""Recursive-descent parser for the closed-form expression grammar.

Grammar (whitespace insignificant)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" (atom | "-" atom))?
    atom   := NUMBER | NAME | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := "exp" | "ln"

``I`` is the imaginary unit.  Names must be declared coordinates or
parameters of the namespace.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .expr import ClosedForm, Coordinate, SymcoreError, check_kernel_grade
from .scalars import ExponentExpr, GaussQ, ParamScalar, UnsupportedSubstitution

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ParseError(SymcoreError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class Namespace:
    """Names the parser may resolve: coordinates (base or composite) and parameters."""

    coordinates: dict = field(default_factory=dict)
    parameters: set = field(default_factory=set)
    allow_undeclared_parameters: bool = False

    @classmethod
    def of(cls, coordinates=(), parameters=(), allow_undeclared_parameters=False):
        coords = {c.name: c for c in coordinates}
        return cls(coords, set(parameters), allow_undeclared_parameters)


class _Parser:
    def __init__(self, text: str, ns: Namespace):
        self.text = text
        self.ns = ns
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                bad = len(stripped[:pos]) + len(stripped[pos:]) - len(stripped[pos:].lstrip())
                raise ParseError(f"unexpected character {stripped[bad]!r}", bad)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(stripped)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> ClosedForm:
        out = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        return out

    def expr(self):
        out = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op, pos = self.take()[1], self.peek()[2]
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                try:
                    out = out / rhs
                except SymcoreError as err:
                    raise ParseError(str(err), pos) from None
        return out

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            inner = self.unary()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            pos = self.peek()[2]
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.take()
                exponent = -self.atom()
            else:
                exponent = self.atom()
            return _raise_power(base, exponent, pos)
        return base

    def atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return ClosedForm.const(int(value))
        if kind == "name":
            if value in ("exp", "ln") and self.peek()[1] == "(":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return _apply_function(value, arg, pos)
            if value == "I":
                return ClosedForm.const(GaussQ(0, 1))
            if value in self.ns.coordinates:
                return ClosedForm.coord(self.ns.coordinates[value])
            if value in self.ns.parameters or self.ns.allow_undeclared_parameters:
                return ClosedForm.const(ParamScalar.symbol(value))
            raise ParseError(f"unknown name {value!r}", pos)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.take(")")
            return inner
        raise ParseError(f"unexpected token {value or 'end of input'!r}", pos)


def _as_scalar(expr: ClosedForm, pos: int) -> ParamScalar:
    if not expr.terms:
        return ParamScalar()
    if len(expr.terms) != 1 or expr.terms[0][0] != ((), (), None):
        raise ParseError("exponent must not depend on coordinates", pos)
    return expr.terms[0][1]


def _raise_power(base: ClosedForm, exponent: ClosedForm, pos: int) -> ClosedForm:
    try:
        e = ExponentExpr.from_scalar(_as_scalar(exponent, pos))
    except UnsupportedSubstitution as err:
        raise ParseError(str(err), pos) from None
    if e.is_integer():
        try:
            return base ** int(e.constant)
        except SymcoreError as err:
            raise ParseError(str(err), pos) from None
    if len(base.terms) != 1:
        raise ParseError("non-integer power of a sum", pos)
    (powers, logs, kernel), coeff = base.terms[0]
    if coeff != 1:
        raise ParseError("non-integer power of a coefficient", pos)
    if logs:
        raise ParseError("non-integer power of a logarithm", pos)
    out = ClosedForm.const(1)
    for c, ce in powers:
        if not ce.is_numeric():
            raise ParseError(f"power of symbolic power {c.name}^({ce}) is not affine", pos)
        out = out * ClosedForm.coord(c, e * ce.constant)
    if kernel is not None:
        if not e.is_numeric():
            raise ParseError("symbolic power of an exponential", pos)
        out = out * ClosedForm.exp(kernel * ParamScalar.const(e.constant))
    return out


def _apply_function(name: str, arg: ClosedForm, pos: int) -> ClosedForm:
    if name == "exp":
        try:
            check_kernel_grade(arg)
        except SymcoreError as err:
            raise ParseError(str(err), pos) from None
        return ClosedForm.exp(arg)
    if len(arg.terms) != 1:
        raise ParseError("ln of a sum is outside the basis", pos)
    (powers, logs, kernel), coeff = arg.terms[0]
    if coeff != 1 or logs or kernel is not None or not powers:
        raise ParseError("ln argument must be a product of coordinate powers", pos)
    out = ClosedForm()
    for c, e in powers:
        out = out + ClosedForm.log(c) * e.to_scalar()
    return out


def parse_closed_form(text: str, namespace: Namespace | Mapping | None = None) -> ClosedForm:
    """Parse ``text`` into a ClosedForm over the names of ``namespace``."""
    if namespace is None:
        namespace = Namespace(allow_undeclared_parameters=True)
    elif not isinstance(namespace, Namespace):
        namespace = Namespace.of(**namespace)
    return _Parser(text, namespace).parse()
