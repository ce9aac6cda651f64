"""Truncated Laurent and Puiseux series with exact coefficients.

A series stores coefficients of ``u^((val + i)/ram)`` for ``i`` in
``range(len(coeffs))`` and is known up to (and including) exponent index
``N = val + len(coeffs) - 1``.  Coefficients are Fractions, ExpPoly or
RatFunc; all three support the ring operations used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Sequence

from ..errors import DegenerateChartError, NotMonic, PrecisionError
from .expoly import ExpPoly, Generator, _SCALARS
from .ratfunc import RatFunc, as_ratfunc, simplify


@dataclass(frozen=True)
class Center:
    """Where a local expansion is taken.  ``point`` is set for finite centers."""

    kind: str
    point: object = None

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "infinity", "finite"):
            raise ValueError(f"unknown center kind {self.kind!r}")
        if self.kind == "finite" and _is_zero(self.point):
            object.__setattr__(self, "kind", "zero")
            object.__setattr__(self, "point", None)

    def __str__(self) -> str:
        return self.kind if self.kind != "finite" else f"finite({self.point})"


ZERO = Center("zero")
INFINITY = Center("infinity")


def finite(p) -> Center:
    return Center("finite", p)


def _is_zero(c) -> bool:
    return c is None or c == 0


class FormalSeries:
    __slots__ = ("val", "coeffs", "center", "ram")

    def __init__(self, val: int, coeffs: Sequence, center: Center | None = None, ram: int = 1):
        self.val = val
        self.coeffs = list(coeffs)
        self.center = center
        self.ram = ram

    @property
    def N(self) -> int:
        """Highest exponent index known exactly."""
        return self.val + len(self.coeffs) - 1

    def coefficient(self, k: int):
        if k > self.N:
            raise PrecisionError(f"coefficient {k} beyond truncation order {self.N}")
        if k < self.val:
            return Fraction(0)
        return self.coeffs[k - self.val]

    def items(self):
        return [(self.val + i, c) for i, c in enumerate(self.coeffs) if not _is_zero(c)]

    def normalized(self) -> "FormalSeries":
        i = 0
        while i < len(self.coeffs) and _is_zero(self.coeffs[i]):
            i += 1
        return FormalSeries(self.val + i, self.coeffs[i:], self.center, self.ram)

    def truncate(self, N: int) -> "FormalSeries":
        if N > self.N:
            raise PrecisionError(f"cannot extend truncation from {self.N} to {N}")
        return FormalSeries(self.val, self.coeffs[: max(0, N - self.val + 1)], self.center, self.ram)

    def _check(self, other: "FormalSeries") -> None:
        if self.ram != other.ram:
            raise ValueError("series with different ramification")

    def __add__(self, other):
        if not isinstance(other, FormalSeries):
            if self.N < 0:
                return self
            other = FormalSeries(0, [other] + [0] * self.N, self.center, self.ram)
        self._check(other)
        lo = min(self.val, other.val)
        hi = min(self.N, other.N)
        out = []
        for k in range(lo, hi + 1):
            a = self.coeffs[k - self.val] if self.val <= k else 0
            b = other.coeffs[k - other.val] if other.val <= k else 0
            out.append(a + b)
        return FormalSeries(lo, out, self.center, self.ram)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries(self.val, [-c for c in self.coeffs], self.center, self.ram)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, FormalSeries):
            return FormalSeries(self.val, [c * other for c in self.coeffs], self.center, self.ram)
        self._check(other)
        a, b = self.normalized(), other.normalized()
        val = a.val + b.val
        N = min(a.N + b.val, b.N + a.val)
        out = []
        for k in range(N - val + 1):
            s = 0
            for i in range(max(0, k - len(b.coeffs) + 1), min(k, len(a.coeffs) - 1) + 1):
                ca = a.coeffs[i]
                cb = b.coeffs[k - i]
                if not _is_zero(ca) and not _is_zero(cb):
                    s = s + ca * cb
            out.append(s)
        return FormalSeries(val, out, self.center, self.ram)

    __rmul__ = __mul__

    def shift(self, k: int) -> "FormalSeries":
        """Multiply by u^(k/ram)."""
        return FormalSeries(self.val + k, self.coeffs, self.center, self.ram)

    def inverse(self) -> "FormalSeries":
        s = self.normalized()
        if not s.coeffs:
            raise PrecisionError("series is zero to its truncation order")
        c0 = s.coeffs[0]
        g0 = _recip(c0)
        n = len(s.coeffs)
        g = [g0]
        for m in range(1, n):
            acc = 0
            for k in range(1, m + 1):
                if not _is_zero(s.coeffs[k]):
                    acc = acc + s.coeffs[k] * g[m - k]
            g.append(_clean(-(acc * g0)))
        return FormalSeries(-s.val, g, self.center, self.ram)

    def __truediv__(self, other):
        if isinstance(other, FormalSeries):
            return self * other.inverse()
        return self * _recip(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while True:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if not n:
                break
            base = base * base
        if result is None:
            return FormalSeries(0, [Fraction(1)] + [0] * max(0, self.N - self.val), self.center, self.ram)
        return result

    def residue(self):
        if self.ram != 1:
            raise ValueError("residue of a ramified series")
        return self.coefficient(-1)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*u^({k}/{self.ram})" for k, c in self.items()) or "0"
        return f"FormalSeries[{self.center}]({body} + O(u^({self.N + 1}/{self.ram})))"


def _recip(c):
    if isinstance(c, _SCALARS):
        return Fraction(1) / Fraction(c)
    return _clean(1 / c)


def _clean(c):
    if isinstance(c, RatFunc):
        return simplify(c)
    return c


# building series from rational functions -----------------------------------

def _univariate(f, var: str) -> tuple[list, list, int]:
    """Split f into num/den coefficient lists in ``var`` (nonneg powers) and a shift."""
    rf = as_ratfunc(f)
    num = rf.num.coefficients_in(var)
    den = rf.den.coefficients_in(var)
    lo = min(min(num, default=0), min(den, default=0))
    pn = _dense(num, -lo)
    pd = _dense(den, -lo)
    return pn, pd, 0


def _dense(d: dict, shift: int) -> list:
    if not d:
        return []
    top = max(d) + shift
    out = [0] * (top + 1)
    for k, c in d.items():
        out[k + shift] = simplify(c)
    return out


def _taylor_shift(poly: list, p) -> list:
    """Coefficients of poly(p + u)."""
    if _is_zero(p):
        return list(poly)
    n = len(poly)
    out = [0] * n
    pp = [Fraction(1)]
    for _ in range(n):
        pp.append(pp[-1] * p)
    for k, c in enumerate(poly):
        if _is_zero(c):
            continue
        for j in range(k + 1):
            out[j] = out[j] + c * comb(k, j) * pp[k - j]
    return [simplify(c) if isinstance(c, (ExpPoly, RatFunc)) else c for c in out]


def _valuation(poly: list) -> int | None:
    for i, c in enumerate(poly):
        if not _is_zero(c):
            return i
    return None


def _poly_quotient(num: list, den: list, count: int) -> list:
    """First ``count`` coefficients of num/den, both with nonzero constant term."""
    d0inv = _recip(den[0])
    out = []
    for n in range(count):
        acc = num[n] if n < len(num) else 0
        for k in range(1, min(n, len(den) - 1) + 1):
            if not _is_zero(den[k]) and not _is_zero(out[n - k]):
                acc = acc - den[k] * out[n - k]
        out.append(_clean(acc * d0inv) if not _is_zero(acc) else Fraction(0))
    return out


def local_parts(f, center: Center, var: str = "w") -> tuple[list, list, int]:
    """Polynomials P, Q in u with f = u^s P(u)/Q(u), P(0) Q(0) != 0."""
    pn, pd, _ = _univariate(f, var)
    if not pn:
        return [], [Fraction(1)], 0
    if center.kind == "infinity":
        dn, dd = len(pn) - 1, len(pd) - 1
        qn, qd = pn[::-1], pd[::-1]
        s = dd - dn
    else:
        qn = _taylor_shift(pn, center.point) if center.kind == "finite" else pn
        qd = _taylor_shift(pd, center.point) if center.kind == "finite" else pd
        s = 0
    vn, vd = _valuation(qn), _valuation(qd)
    if vd is None:
        raise ZeroDivisionError("denominator vanishes identically")
    if vn is None:
        return [], [Fraction(1)], 0
    if vn > 0 and vd > 0:
        raise DegenerateChartError(f"numerator and denominator both vanish at {center}")
    return qn[vn:], qd[vd:], s + vn - vd


def laurent_expand(f, center: Center, N: int, var: str = "w") -> FormalSeries:
    """Expansion of a rational function of ``var`` through u^N."""
    P, Q, s = local_parts(f, center, var)
    if not P:
        return FormalSeries(N + 1, [], center)
    count = N - s + 1
    if count <= 0:
        return FormalSeries(N + 1, [], center)
    return FormalSeries(s, _poly_quotient(P, Q, count), center)


def unit_power(unit: FormalSeries, a: Fraction) -> FormalSeries:
    """(1 + h)^a for a series with constant term 1 and valuation 0."""
    if unit.val != 0 or not unit.coeffs or unit.coeffs[0] != 1:
        raise NotMonic("unit part must start with 1")
    f = unit.coeffs
    n_terms = len(f)
    g = [Fraction(1)]
    for n in range(1, n_terms):
        acc = 0
        for k in range(1, n + 1):
            if not _is_zero(f[k]):
                w = a * k - (n - k)
                if w:
                    acc = acc + f[k] * g[n - k] * w
        g.append(_clean(acc / n) if not _is_zero(acc) else Fraction(0))
    return FormalSeries(0, g, unit.center, unit.ram)


def monomial_root(c, m: int):
    """An exact m-th root of a scalar or ExpPoly monomial; raises if none exists."""
    if isinstance(c, RatFunc):
        c = c.as_expoly()
    if isinstance(c, _SCALARS):
        c = Fraction(c)
        rn, rd = _int_root(c.numerator, m), _int_root(c.denominator, m)
        if rn is None or rd is None:
            raise NotMonic(f"{c} has no rational {m}-th root")
        return Fraction(rn, rd)
    if not isinstance(c, ExpPoly) or not c.is_monomial():
        raise NotMonic("leading coefficient is not a monomial")
    ((e, k),) = c.terms.items()
    if any(x % m for x in e):
        raise NotMonic("monomial exponent not divisible")
    root_k = monomial_root(k, m)
    return ExpPoly(c.gens, {tuple(x // m for x in e): root_k}, _trusted=True)


def _int_root(n: int, m: int) -> int | None:
    if n < 0:
        if m % 2 == 0:
            return None
        r = _int_root(-n, m)
        return None if r is None else -r
    r = round(n ** (1.0 / m)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**m == n:
            return cand
    lo, hi = 0, n
    while lo <= hi:
        mid = (lo + hi) // 2
        p = mid**m
        if p == n:
            return mid
        if p < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def series_root(f, center: Center, m: int, N: int, var: str = "w", *, require_monic: bool = False) -> FormalSeries:
    """Principal branch of f^(1/m) at a center, unit part known through u^N.

    The leading coefficient must be 1 (when ``require_monic``) or a perfect
    m-th power monomial; the result has ramification ``m / gcd(val, m)``.
    """
    P, Q, s = local_parts(f, center, var)
    if not P:
        raise DegenerateChartError("root of the zero function")
    unit = FormalSeries(0, _poly_quotient(P, Q, N + 1), center)
    c0 = unit.coeffs[0]
    if require_monic and c0 != 1:
        raise NotMonic(f"leading coefficient {c0} is not 1")
    lead = monomial_root(c0, m) if c0 != 1 else Fraction(1)
    if c0 != 1:
        unit = unit * _recip(c0)
    root_unit = unit_power(unit, Fraction(1, m))
    g = gcd(s, m)
    ram = m // g
    val = s // g
    coeffs = [0] * ((len(root_unit.coeffs) - 1) * ram + 1)
    for i, c in enumerate(root_unit.coeffs):
        coeffs[i * ram] = c * lead if lead != 1 else c
    return FormalSeries(val, coeffs, center, ram)


def puiseux_root(f, m: int, N: int, var: str = "w") -> FormalSeries:
    """f^(1/m) at infinity for f with monic local leading term."""
    return series_root(f, INFINITY, m, N, var, require_monic=True)


def local_variable(center: Center, var: str = "w"):
    """u as a function of w for the center (for documentation and tests)."""
    w = ExpPoly.var(Generator(var, laurent=True))
    if center.kind == "infinity":
        return w ** -1
    if center.kind == "zero":
        return w
    return w - center.point
