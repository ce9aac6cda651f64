"""Sparse multivariate Laurent polynomials over Q with exponential generators.

An exponential generator ``E[x]`` stands for ``exp(x)``.  It is an independent
Laurent variable, tied to its base ``x`` only through the derivation rule
``d/dx E[x] = E[x]``.  Every other identity is checked with ``E[x]`` treated as
a free symbol, which is sound because ``exp`` is transcendental.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping, Union

from ..errors import PoleHit, UnknownGenerator

Scalar = Union[int, Fraction]
_SCALARS = (int, Fraction)


@dataclass(frozen=True)
class Generator:
    """A named variable.  ``base`` is set for exponential generators."""

    name: str
    base: str | None = None
    laurent: bool = False

    def __post_init__(self) -> None:
        if self.base is not None and not self.laurent:
            object.__setattr__(self, "laurent", True)

    @property
    def is_exponential(self) -> bool:
        return self.base is not None

    def __str__(self) -> str:
        return self.name


def ordinary(name: str, laurent: bool = False) -> Generator:
    return Generator(name, None, laurent)


def exponential(base: str | Generator) -> Generator:
    base = base.name if isinstance(base, Generator) else base
    return Generator(f"E[{base}]", base, True)


_DIGITS = re.compile(r"(\d+)")


def _natural(name: str) -> tuple:
    parts = _DIGITS.split(name)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


def sort_key(g: Generator) -> tuple:
    return (g.is_exponential, _natural(g.name))


@lru_cache(maxsize=8192)
def _merge(ga: tuple, gb: tuple):
    by_name: dict[str, Generator] = {}
    for g in ga + gb:
        prev = by_name.get(g.name)
        if prev is not None and prev != g:
            raise ValueError(f"conflicting declarations for generator {g.name!r}")
        by_name[g.name] = g
    merged = tuple(sorted(by_name.values(), key=sort_key))
    pos = {g.name: i for i, g in enumerate(merged)}
    return merged, tuple(pos[g.name] for g in ga), tuple(pos[g.name] for g in gb)


def _lift(terms: dict, idx: tuple, n: int) -> dict:
    if idx == tuple(range(n)):
        return terms
    out = {}
    for e, c in terms.items():
        v = [0] * n
        for i, x in zip(idx, e):
            v[i] = x
        out[tuple(v)] = c
    return out


def align(a: "ExpPoly", b: "ExpPoly"):
    """Return ``(gens, terms_a, terms_b)`` over a common generator tuple."""
    if a.gens is b.gens or a.gens == b.gens:
        return a.gens, a.terms, b.terms
    gens, ia, ib = _merge(a.gens, b.gens)
    n = len(gens)
    return gens, _lift(a.terms, ia, n), _lift(b.terms, ib, n)


def _addto(out: dict, e: tuple, c) -> None:
    v = out.get(e)
    if v is None:
        out[e] = c
    else:
        s = v + c
        if s:
            out[e] = s
        else:
            del out[e]


class ExpPoly:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to Fractions."""

    __slots__ = ("gens", "terms", "_canon")

    def __init__(self, gens: Iterable[Generator] = (), terms: Mapping | None = None, *, _trusted: bool = False):
        gens = tuple(gens)
        terms = {} if terms is None else terms
        if _trusted:
            self.gens = gens
            self.terms = terms
        else:
            order = sorted(range(len(gens)), key=lambda i: sort_key(gens[i]))
            if len({g.name for g in gens}) != len(gens):
                raise ValueError("duplicate generator names")
            sgens = tuple(gens[i] for i in order)
            clean: dict = {}
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != len(gens):
                    raise ValueError("exponent vector length does not match generators")
                c = Fraction(c)
                if not c:
                    continue
                e = tuple(e[i] for i in order)
                for g, x in zip(sgens, e):
                    if x < 0 and not g.laurent:
                        raise ValueError(f"negative exponent on non-Laurent generator {g.name}")
                _addto(clean, e, c)
            self.gens = sgens
            self.terms = clean
        self._canon = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar, gens: Iterable[Generator] = ()) -> "ExpPoly":
        gens = tuple(sorted(gens, key=sort_key))
        c = Fraction(c)
        return cls(gens, {(0,) * len(gens): c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, g: Generator, power: int = 1) -> "ExpPoly":
        if power < 0 and not g.laurent:
            raise ValueError(f"negative exponent on non-Laurent generator {g.name}")
        return cls((g,), {(power,): Fraction(1)}, _trusted=True)

    @classmethod
    def monomial(cls, powers: Mapping[Generator, int], coeff: Scalar = 1) -> "ExpPoly":
        gens = tuple(powers)
        return cls(gens, {tuple(powers[g] for g in gens): coeff})

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return next(iter(self.terms.values()), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.gens), Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def used(self) -> tuple[Generator, ...]:
        return tuple(g for i, g in enumerate(self.gens) if any(e[i] for e in self.terms))

    def free_names(self) -> set[str]:
        return {g.name for g in self.used()}

    def depends_on(self, name: str) -> bool:
        """True if ``name`` appears as a generator or as the base of one."""
        return any(g.name == name or g.base == name for g in self.used())

    def exponent_of(self, name: str) -> int | None:
        for i, g in enumerate(self.gens):
            if g.name == name:
                return i
        return None

    def _canonical(self):
        if self._canon is None:
            used = [i for i in range(len(self.gens)) if any(e[i] for e in self.terms)]
            gens = tuple(self.gens[i] for i in used)
            terms = frozenset((tuple(e[i] for i in used), c) for e, c in self.terms.items())
            self._canon = (gens, terms)
        return self._canon

    def sorted_terms(self):
        """Terms in graded-lex descending order over the generator tuple."""
        return sorted(self.terms.items(), key=lambda it: (sum(it[0]), it[0]), reverse=True)

    def leading(self):
        return self.sorted_terms()[0]

    def degree_in(self, name: str) -> tuple[int, int]:
        """(min, max) exponent of a generator; (0, 0) if absent."""
        i = self.exponent_of(name)
        if i is None or not self.terms:
            return (0, 0)
        xs = [e[i] for e in self.terms]
        return (min(xs), max(xs))

    def weighted_degrees(self, weights: Mapping[str, Fraction]) -> set[Fraction]:
        """Set of weighted degrees of the monomials (missing weights count as 0)."""
        ws = [Fraction(weights.get(g.name, 0)) for g in self.gens]
        return {sum((w * x for w, x in zip(ws, e)), Fraction(0)) for e in self.terms}

    def total_degree(self, names: Iterable[str] | None = None) -> int:
        if not self.terms:
            return -1
        sel = [i for i, g in enumerate(self.gens) if names is None or g.name in set(names)]
        return max(sum(e[i] for i in sel) for e in self.terms)

    def coefficients_in(self, name: str) -> dict[int, "ExpPoly"]:
        """View as a Laurent polynomial in one generator."""
        i = self.exponent_of(name)
        if i is None:
            return {0: self} if self.terms else {}
        rest = {}
        for e, c in self.terms.items():
            k = e[i]
            rest.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: ExpPoly(self.gens, t, _trusted=True) for k, t in rest.items()}

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        names = {g.name for g in self.gens}
        if any(x for k, x in powers.items() if k not in names):
            return Fraction(0)
        e = tuple(powers.get(g.name, 0) for g in self.gens)
        return self.terms.get(e, Fraction(0))

    def with_gens(self, gens: Iterable[Generator]) -> "ExpPoly":
        """Re-express over a larger declared generator list."""
        merged, idx, _ = _merge(self.gens, tuple(gens))
        return ExpPoly(merged, _lift(self.terms, idx, len(merged)), _trusted=True)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "ExpPoly | None":
        if isinstance(other, ExpPoly):
            return other
        if isinstance(other, _SCALARS):
            return ExpPoly.constant(other, self.gens)
        return None

    def __neg__(self) -> "ExpPoly":
        return ExpPoly(self.gens, {e: -c for e, c in self.terms.items()}, _trusted=True)

    def __pos__(self) -> "ExpPoly":
        return self

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self
        if not self.terms and o.gens == self.gens:
            return o
        gens, ta, tb = align(self, o)
        out = dict(ta)
        for e, c in tb.items():
            _addto(out, e, c)
        return ExpPoly(gens, out, _trusted=True)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Scalar) -> "ExpPoly":
        c = Fraction(c)
        if not c:
            return ExpPoly(self.gens, {}, _trusted=True)
        return ExpPoly(self.gens, {e: v * c for e, v in self.terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        gens, ta, tb = align(self, other)
        if len(ta) > len(tb):
            ta, tb = tb, ta
        out: dict = {}
        add = operator.add
        for e1, c1 in ta.items():
            for e2, c2 in tb.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return ExpPoly(gens, {e: c for e, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def is_laurent_monomial(self) -> bool:
        """A single term whose non-zero exponents sit on Laurent generators."""
        if len(self.terms) != 1:
            return False
        (e,) = self.terms
        return all(x == 0 or g.laurent for g, x in zip(self.gens, e))

    def monomial_inverse(self) -> "ExpPoly":
        if not self.is_laurent_monomial():
            raise ValueError("only Laurent monomials are invertible in the polynomial ring")
        ((e, c),) = self.terms.items()
        return ExpPoly(self.gens, {tuple(-x for x in e): 1 / c}, _trusted=True)

    def __truediv__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, ExpPoly):
            if not other.terms:
                raise ZeroDivisionError("division by the zero polynomial")
            if other.is_laurent_monomial():
                return self * other.monomial_inverse()
            from .ratfunc import RatFunc

            return RatFunc(self, other)
        from .ratfunc import RatFunc

        if isinstance(other, RatFunc):
            return RatFunc(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, _SCALARS):
            return ExpPoly.constant(other, self.gens) / self
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.is_laurent_monomial():
                return self.monomial_inverse() ** (-n)
            from .ratfunc import RatFunc

            return RatFunc(ExpPoly.constant(1, self.gens), self ** (-n))
        if len(self.terms) == 1:
            ((e, c),) = self.terms.items()
            return ExpPoly(self.gens, {tuple(x * n for x in e): c**n}, _trusted=True)
        result = ExpPoly.constant(1, self.gens)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            if other == 0:
                return not self.terms
            return self.is_constant() and len(self.terms) == 1 and self.constant_value() == other
        if isinstance(other, ExpPoly):
            return self._canonical() == other._canonical()
        from .ratfunc import RatFunc

        if isinstance(other, RatFunc):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self._canonical())

    def __bool__(self) -> bool:
        return bool(self.terms)

    # calculus -----------------------------------------------------------
    def differentiate(self, var: str | Generator) -> "ExpPoly":
        """Derivative; a ``Generator`` argument is treated as declared even if absent."""
        name = var.name if isinstance(var, Generator) else var
        i_ord = None
        i_exp = []
        for i, g in enumerate(self.gens):
            if g.name == name and not g.is_exponential:
                i_ord = i
            elif g.base == name:
                i_exp.append(i)
        if i_ord is None and not i_exp:
            if isinstance(var, Generator) and not var.is_exponential:
                return ExpPoly(self.gens, {}, _trusted=True)
            raise UnknownGenerator(name)
        out: dict = {}
        for e, c in self.terms.items():
            if i_ord is not None and e[i_ord]:
                k = e[i_ord]
                _addto(out, e[:i_ord] + (k - 1,) + e[i_ord + 1:], c * k)
            for j in i_exp:
                if e[j]:
                    _addto(out, e, c * e[j])
        return ExpPoly(self.gens, out, _trusted=True)

    def integrate(self, var: Generator) -> "ExpPoly":
        """An antiderivative in an ordinary generator, handling ``t^m E[t]^k``."""
        if var.is_exponential:
            raise ValueError("cannot integrate with respect to an exponential generator")
        poly = self.with_gens((var,))
        i = poly.exponent_of(var.name)
        j = next((k for k, g in enumerate(poly.gens) if g.base == var.name), None)
        out: dict = {}
        for e, c in poly.terms.items():
            m = e[i]
            k = e[j] if j is not None else 0
            if k == 0:
                if m == -1:
                    raise ValueError("antiderivative of 1/t is not polynomial")
                _addto(out, e[:i] + (m + 1,) + e[i + 1:], c / (m + 1))
                continue
            if m < 0:
                raise ValueError("antiderivative of t^-m e^(kt) is not elementary")
            for s in range(m + 1):
                coef = c * Fraction((-1) ** s * factorial(m) // factorial(m - s)) / Fraction(k) ** (s + 1)
                _addto(out, e[:i] + (m - s,) + e[i + 1:], coef)
        return ExpPoly(poly.gens, out, _trusted=True)

    # evaluation and substitution ---------------------------------------
    def eval_exact(self, assignment: Mapping[str, Scalar]) -> Fraction:
        values = []
        for i, g in enumerate(self.gens):
            if not any(e[i] for e in self.terms):
                values.append(None)
                continue
            try:
                values.append(Fraction(assignment[g.name]))
            except KeyError:
                raise UnknownGenerator(g.name) from None
        powers: dict = {}
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, x in enumerate(e):
                if x:
                    key = (i, x)
                    p = powers.get(key)
                    if p is None:
                        base = values[i]
                        if x < 0 and base == 0:
                            raise PoleHit(f"{self.gens[i].name} = 0 in a negative power")
                        p = base**x
                        powers[key] = p
                    v *= p
            total += v
        return total

    def subs(self, mapping: Mapping[str, object]):
        """Substitute generators by ExpPoly, RatFunc or scalars (names as keys)."""
        keep = []
        targets = {}
        for i, g in enumerate(self.gens):
            if g.name in mapping:
                targets[i] = mapping[g.name]
            else:
                keep.append(i)
        if not targets:
            return self
        kept_gens = tuple(self.gens[i] for i in keep)
        cache: dict = {}
        result = ExpPoly.constant(0, kept_gens)
        for e, c in self.terms.items():
            term = ExpPoly(kept_gens, {tuple(e[i] for i in keep): c}, _trusted=True)
            for i, val in targets.items():
                x = e[i]
                if not x:
                    continue
                key = (i, x)
                p = cache.get(key)
                if p is None:
                    p = _power(val, x)
                    cache[key] = p
                term = term * p
            result = result + term
        return result

    def rename(self, mapping: Mapping[str, str]) -> "ExpPoly":
        """Rename ordinary generators; exponential generators follow their bases."""
        gens = []
        for g in self.gens:
            if g.is_exponential and g.base in mapping:
                gens.append(exponential(mapping[g.base]))
            elif not g.is_exponential and g.name in mapping:
                gens.append(Generator(mapping[g.name], None, g.laurent))
            else:
                gens.append(g)
        return ExpPoly(gens, self.terms)

    def map_coefficients(self, fn) -> "ExpPoly":
        return ExpPoly(self.gens, {e: Fraction(fn(c)) for e, c in self.terms.items()})

    # text -------------------------------------------------------------
    def __str__(self) -> str:
        from .text import format_expoly

        return format_expoly(self)

    def __repr__(self) -> str:
        return f"ExpPoly({str(self)!r})"


def _power(val, x: int):
    if isinstance(val, _SCALARS):
        v = Fraction(val)
        if x < 0 and v == 0:
            raise PoleHit("substituted zero into a negative power")
        return v**x
    return val**x


def const(c: Scalar) -> ExpPoly:
    return ExpPoly.constant(c)


def gen(name: str, laurent: bool = False) -> ExpPoly:
    return ExpPoly.var(ordinary(name, laurent))


def exp_of(base: str) -> ExpPoly:
    return ExpPoly.var(exponential(base))


def as_expoly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, _SCALARS):
        return ExpPoly.constant(x)
    raise TypeError(f"cannot convert {type(x).__name__} to ExpPoly")
