"""Canonical text form and a small parser for it.

Text uses ``*``, ``^`` (or ``**``), ``/`` and exact rational coefficients.
Exponential generators print as ``E[beta_1]``; the parser also accepts
``exp(<integer-linear form>)`` and ``log(<expr>)`` (the latter only through
:func:`parse_with_logs`).
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable

from .expoly import ExpPoly, Generator, _SCALARS, exponential, ordinary
from .ratfunc import RatFunc, as_ratfunc, simplify

DEFAULT_LAURENT = frozenset({"w"})


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(gens: tuple[Generator, ...], e: tuple[int, ...]) -> str:
    parts = []
    for g, x in zip(gens, e):
        if x == 1:
            parts.append(g.name)
        elif x:
            parts.append(f"{g.name}^{x}")
    return "*".join(parts)


def format_expoly(p: ExpPoly) -> str:
    if not p.terms:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = format_monomial(p.gens, e)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def format_ratfunc(f: RatFunc) -> str:
    if f.den == 1:
        return format_expoly(f.num)
    num = format_expoly(f.num)
    den = format_expoly(f.den)
    if len(f.num.terms) > 1:
        num = f"({num})"
    if len(f.den.terms) > 1 or not f.den.is_constant():
        den = f"({den})"
    return f"{num}/{den}"


def format_value(x) -> str:
    if isinstance(x, _SCALARS):
        return _format_coeff(Fraction(x))
    if isinstance(x, RatFunc):
        return format_ratfunc(x)
    return format_expoly(x)


# parsing -------------------------------------------------------------------


class _Expr:
    """Smooth part plus log atoms while parsing."""

    __slots__ = ("smooth", "logs")

    def __init__(self, smooth, logs=()):
        self.smooth = smooth
        self.logs = list(logs)

    def add(self, other: "_Expr", sign: int = 1) -> "_Expr":
        logs = self.logs + [(c * sign, a) for c, a in other.logs]
        return _Expr(self.smooth + other.smooth * sign, logs)

    def mul(self, other: "_Expr") -> "_Expr":
        if self.logs and other.logs:
            raise ValueError("product of two logarithms is not supported")
        if other.logs:
            self, other = other, self
        logs = [(c * other.smooth, a) for c, a in self.logs]
        return _Expr(self.smooth * other.smooth, logs)


class _Parser:
    def __init__(self, laurent: Iterable[str], allow_logs: bool):
        self.laurent = frozenset(laurent)
        self.allow_logs = allow_logs

    def generator(self, name: str) -> ExpPoly:
        return ExpPoly.var(ordinary(name, name in self.laurent))

    def smooth(self, node) -> object:
        e = self.visit(node)
        if e.logs:
            raise ValueError("logarithm in a position that requires a rational expression")
        return e.smooth

    def visit(self, node) -> _Expr:
        if isinstance(node, ast.Expression):
            return self.visit(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                raise ValueError(f"unsupported literal {node.value!r}")
            return _Expr(ExpPoly.constant(node.value))
        if isinstance(node, ast.Name):
            return _Expr(self.generator(node.id))
        if isinstance(node, ast.Subscript):
            if not (isinstance(node.value, ast.Name) and node.value.id == "E"):
                raise ValueError("only E[...] subscripts are allowed")
            inner = node.slice
            if not isinstance(inner, ast.Name):
                raise ValueError("E[...] takes a single generator name")
            return _Expr(ExpPoly.var(exponential(inner.id)))
        if isinstance(node, ast.UnaryOp):
            e = self.visit(node.operand)
            if isinstance(node.op, ast.USub):
                return _Expr(-e.smooth, [(-c, a) for c, a in e.logs])
            if isinstance(node.op, ast.UAdd):
                return e
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return self.visit(node.left).add(self.visit(node.right))
            if isinstance(node.op, ast.Sub):
                return self.visit(node.left).add(self.visit(node.right), -1)
            if isinstance(node.op, ast.Mult):
                return self.visit(node.left).mul(self.visit(node.right))
            if isinstance(node.op, ast.Div):
                left = self.visit(node.left)
                right = self.smooth(node.right)
                if isinstance(right, ExpPoly) and right.is_constant():
                    inv = Fraction(1) / right.constant_value()
                else:
                    inv = simplify(1 / right)
                return left.mul(_Expr(inv))
            if isinstance(node.op, ast.Pow):
                base = self.smooth(node.left)
                expo = self.smooth(node.right)
                if not (isinstance(expo, ExpPoly) and expo.is_constant() and expo.constant_value().denominator == 1):
                    raise ValueError("exponents must be integers")
                return _Expr(base ** int(expo.constant_value()))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
            if node.func.id == "exp":
                return _Expr(_exp_of_linear(self.smooth(node.args[0])))
            if node.func.id == "log":
                if not self.allow_logs:
                    raise ValueError("log(...) is only allowed in prepotential text")
                return _Expr(ExpPoly.constant(0), [(ExpPoly.constant(1), self.smooth(node.args[0]))])
        raise ValueError(f"unsupported syntax: {ast.dump(node)[:60]}")


def _exp_of_linear(arg) -> ExpPoly:
    if not isinstance(arg, ExpPoly):
        raise ValueError("exp() argument must be polynomial")
    out = ExpPoly.constant(1)
    for e, c in arg.terms.items():
        nz = [(g, x) for g, x in zip(arg.gens, e) if x]
        if len(nz) != 1 or nz[0][1] != 1 or nz[0][0].is_exponential or c.denominator != 1:
            raise ValueError("exp() argument must be an integer-linear form in ordinary generators")
        out = out * ExpPoly.var(exponential(nz[0][0].name), int(c))
    return out


def _prepare(text: str) -> ast.Expression:
    src = text.replace("^", "**").strip()
    try:
        return ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse expression: {text!r}") from exc


def parse_expr(text: str, laurent: Iterable[str] = DEFAULT_LAURENT):
    """Parse canonical text into an ExpPoly (or RatFunc when a division remains)."""
    value = _Parser(laurent, False).smooth(_prepare(text))
    if isinstance(value, RatFunc):
        return simplify(value)
    return value


def parse_with_logs(text: str, laurent: Iterable[str] = DEFAULT_LAURENT):
    """Parse text with ``log`` atoms; returns (smooth, [(coeff, arg), ...])."""
    e = _Parser(laurent, True).visit(_prepare(text))
    return e.smooth, e.logs


def parse_ratfunc(text: str, laurent: Iterable[str] = DEFAULT_LAURENT) -> RatFunc:
    return as_ratfunc(parse_expr(text, laurent))
