"""Rational functions ``num/den`` of ExpPoly with a canonical reduced form.

Canonical form: gcd(num, den) = 1, the denominator carries no monomial
content in Laurent generators (that content is moved to the numerator as
negative exponents) and its graded-lex leading coefficient is 1.
Multivariate gcds are delegated to sympy's sparse polynomial rings.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from ..errors import PoleHit, UnknownGenerator
from .expoly import ExpPoly, Generator, _SCALARS, align


@lru_cache(maxsize=64)
def _ring(n: int):
    return ring([f"x{i}" for i in range(n)], QQ)[0]


def _to_sympy(R, terms: dict):
    return R.from_dict({e: QQ(c.numerator, c.denominator) for e, c in terms.items()})


def _from_sympy(p) -> dict:
    return {tuple(e): Fraction(int(c.numerator), int(c.denominator)) for e, c in p.items()}


def _content_shift(terms: dict, n: int) -> tuple[dict, tuple]:
    """Divide out the monomial content; return (terms, content exponents)."""
    mins = [min(e[i] for e in terms) for i in range(n)]
    if not any(mins):
        return terms, tuple(mins)
    return {tuple(x - m for x, m in zip(e, mins)): c for e, c in terms.items()}, tuple(mins)


def _shift(terms: dict, by) -> dict:
    return {tuple(x + m for x, m in zip(e, by)): c for e, c in terms.items()}


def _leading_coeff(terms: dict) -> Fraction:
    e = max(terms, key=lambda e: (sum(e), e))
    return terms[e]


def _normalize(num: ExpPoly, den: ExpPoly) -> tuple[ExpPoly, ExpPoly]:
    if not den.terms:
        raise ZeroDivisionError("rational function with zero denominator")
    gens, tn, td = align(num, den)
    n = len(gens)
    if not tn:
        return ExpPoly(gens, {}, _trusted=True), ExpPoly.constant(1, gens)
    tn, cn = _content_shift(tn, n)
    td, cd = _content_shift(td, n)
    lau = [0] * n
    pos_n = [0] * n
    pos_d = [0] * n
    for i, g in enumerate(gens):
        diff = cn[i] - cd[i]
        if g.laurent:
            lau[i] = diff
        elif diff >= 0:
            pos_n[i] = diff
        else:
            pos_d[i] = -diff
    if len(tn) > 1 and len(td) > 1:
        R = _ring(n)
        _, a, b = _to_sympy(R, tn).cofactors(_to_sympy(R, td))
        tn, td = _from_sympy(a), _from_sympy(b)
    if any(pos_n):
        tn = _shift(tn, pos_n)
    if any(pos_d):
        td = _shift(td, pos_d)
    if any(lau):
        tn = _shift(tn, lau)
    lc = _leading_coeff(td)
    if lc != 1:
        inv = 1 / lc
        tn = {e: c * inv for e, c in tn.items()}
        td = {e: c * inv for e, c in td.items()}
    return ExpPoly(gens, tn, _trusted=True), ExpPoly(gens, td, _trusted=True)


class RatFunc:
    """Immutable reduced quotient of two ExpPoly."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _reduced: bool = False):
        num = _as_poly(num)
        den = ExpPoly.constant(1, num.gens) if den is None else _as_poly(den)
        if _reduced:
            self.num, self.den = num, den
        else:
            self.num, self.den = _normalize(num, den)

    # inspection ---------------------------------------------------------
    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_expoly(self) -> ExpPoly:
        if not self.is_polynomial():
            raise ValueError("rational function is not a (Laurent) polynomial")
        return self.num / self.den.constant_value()

    def simplify(self):
        """Collapse to ExpPoly when the denominator is trivial."""
        return self.as_expoly() if self.is_polynomial() else self

    def is_zero(self) -> bool:
        return not self.num.terms

    def free_names(self) -> set[str]:
        return self.num.free_names() | self.den.free_names()

    def depends_on(self, name: str) -> bool:
        return self.num.depends_on(name) or self.den.depends_on(name)

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            return self
        if self.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if self.is_polynomial() and self.den == 1:
            return RatFunc(self.num * o.den + o.num, o.den, _reduced=True)
        if o.is_polynomial() and o.den == 1:
            return RatFunc(o.num * self.den + self.num, self.den, _reduced=True)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                return RatFunc(ExpPoly.constant(0, self.num.gens))
            return RatFunc(self.num.scale(other), self.den, _reduced=True)
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        if self.den == 1 and o.den == 1:
            return RatFunc(self.num * o.num, self.den, _reduced=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return RatFunc(self.num.scale(Fraction(1) / Fraction(other)), self.den, _reduced=True)
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, _reduced=True)

    def __eq__(self, other):
        o = _as_rf(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.den == 1:
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    # calculus -----------------------------------------------------------
    def differentiate(self, var: str | Generator) -> "RatFunc":
        name = _name(var)
        if not isinstance(var, Generator) and not (_declares(self.num, name) or _declares(self.den, name)):
            raise UnknownGenerator(name)
        g = Generator(name)
        dn = self.num.differentiate(g)
        if not self.den.depends_on(name):
            return RatFunc(dn, self.den)
        dd = self.den.differentiate(g)
        return RatFunc(dn * self.den - self.num * dd, self.den * self.den)

    def eval_exact(self, assignment: Mapping[str, object]) -> Fraction:
        d = self.den.eval_exact(assignment)
        if d == 0:
            raise PoleHit("denominator vanishes at the evaluation point")
        return self.num.eval_exact(assignment) / d

    def subs(self, mapping: Mapping[str, object]):
        return _as_rf(self.num.subs(mapping)) / _as_rf(self.den.subs(mapping))

    def rename(self, mapping: Mapping[str, str]) -> "RatFunc":
        return RatFunc(self.num.rename(mapping), self.den.rename(mapping))

    def __str__(self) -> str:
        from .text import format_ratfunc

        return format_ratfunc(self)

    def __repr__(self) -> str:
        return f"RatFunc({str(self)!r})"


def _name(var) -> str:
    return var.name if isinstance(var, Generator) else var


def _declares(p: ExpPoly, name: str) -> bool:
    return any(g.name == name and not g.is_exponential or g.base == name for g in p.gens)


def _as_poly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, _SCALARS):
        return ExpPoly.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


def _as_rf(x) -> RatFunc | None:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, ExpPoly):
        return RatFunc(x, ExpPoly.constant(1, x.gens), _reduced=True)
    if isinstance(x, _SCALARS):
        return RatFunc(ExpPoly.constant(x), ExpPoly.constant(1), _reduced=True)
    return None


def as_ratfunc(x) -> RatFunc:
    r = _as_rf(x)
    if r is None:
        raise TypeError(f"cannot convert {type(x).__name__} to RatFunc")
    return r


def differentiate(f, var):
    """Derivative of a scalar, ExpPoly or RatFunc."""
    if isinstance(f, _SCALARS):
        return Fraction(0)
    return f.differentiate(var)


def eval_exact(f, assignment: Mapping[str, object]) -> Fraction:
    if isinstance(f, _SCALARS):
        return Fraction(f)
    return f.eval_exact(assignment)


def simplify(x):
    """Return the simplest carrier: Fraction, ExpPoly or RatFunc."""
    if isinstance(x, RatFunc):
        x = x.simplify()
    if isinstance(x, ExpPoly) and x.is_constant():
        return x.constant_value()
    return x


def divide_with_remainder(num: ExpPoly, den: ExpPoly) -> tuple[ExpPoly, ExpPoly]:
    """Multivariate division num = q*den + rem in sympy's sparse ring."""
    num, den = _as_poly(num), _as_poly(den)
    gens, tn, td = align(num, den)
    if any(x < 0 for e in list(tn) + list(td) for x in e):
        raise ValueError("division needs polynomial operands")
    R = _ring(len(gens))
    q, rem = _to_sympy(R, tn).div(_to_sympy(R, td))
    return ExpPoly(gens, _from_sympy(q)), ExpPoly(gens, _from_sympy(rem))
