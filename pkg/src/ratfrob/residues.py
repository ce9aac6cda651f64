"""Residues of rational one-forms and sums over critical points of a superpotential.

Integrands are kept in partial-fraction shape: a finite Laurent part in ``w``
plus principal parts at explicitly known points.  Every such piece has a closed
form expansion at any center, so series are exact to any requested order and
no critical point is ever solved for.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Mapping, Sequence

from .core.expoly import ExpPoly, _SCALARS
from .core.ratfunc import RatFunc, as_ratfunc, simplify
from .core.series import INFINITY, ZERO, Center, FormalSeries, finite, laurent_expand
from .errors import DegenerateChartError, DiscriminantError, PrecisionError

OMEGA_KINDS = ("dw", "-dw/w")


def _is_zero(c) -> bool:
    return c == 0


def _cl(c):
    return simplify(c) if isinstance(c, (RatFunc, ExpPoly)) else c


def _gbinom(k: int, j: int) -> Fraction:
    """Binomial coefficient C(k, j) for any integer k."""
    if k >= 0:
        return Fraction(comb(k, j))
    num = 1
    for i in range(j):
        num *= k - i
    return Fraction(num, factorial(j))


@dataclass(frozen=True)
class Pole:
    point: object
    order: int
    coeff: object


class PartialFractions:
    """f(w) = sum_k laurent[k] w^k + sum coeff / (w - point)^order."""

    __slots__ = ("laurent", "poles")

    def __init__(self, laurent: Mapping[int, object] | None = None, poles: Iterable[Pole] = ()):
        self.laurent = {k: c for k, c in (laurent or {}).items() if not _is_zero(c)}
        self.poles = tuple(p for p in poles if not _is_zero(p.coeff))

    @classmethod
    def from_expoly(cls, p: ExpPoly, var: str = "w") -> "PartialFractions":
        return cls({k: _cl(c) for k, c in p.coefficients_in(var).items()})

    def derivative(self) -> "PartialFractions":
        lau = {k - 1: c * k for k, c in self.laurent.items() if k}
        poles = [Pole(p.point, p.order + 1, _cl(p.coeff * (-p.order))) for p in self.poles]
        return PartialFractions(lau, poles)

    def scale(self, c) -> "PartialFractions":
        return PartialFractions(
            {k: _cl(v * c) for k, v in self.laurent.items()},
            [Pole(p.point, p.order, _cl(p.coeff * c)) for p in self.poles],
        )

    def __add__(self, other: "PartialFractions") -> "PartialFractions":
        lau = dict(self.laurent)
        for k, c in other.laurent.items():
            lau[k] = _cl(lau.get(k, 0) + c)
        return PartialFractions(lau, self.poles + other.poles)

    def centers(self) -> list:
        """Distinct pole points, by structural equality."""
        pts: list = []
        for p in self.poles:
            if not any(p.point == q for q in pts):
                pts.append(p.point)
        return pts

    def has_negative_powers(self) -> bool:
        return any(k < 0 for k in self.laurent)

    def lowest_exponent(self, center: Center) -> int:
        """A lower bound for the valuation at ``center`` read off the shape."""
        if center.kind == "infinity":
            cands = [-k for k in self.laurent] + [p.order for p in self.poles]
        elif center.kind == "zero":
            cands = [min(0, k) for k in self.laurent] + [0 for _ in self.poles]
        else:
            cands = [0 for _ in self.laurent] + [
                -p.order if p.point == center.point else 0 for p in self.poles
            ]
        return min(cands) if cands else 0

    def expand(self, center: Center, N: int) -> FormalSeries:
        """Exact expansion through u^N."""
        lo = self.lowest_exponent(center)
        out = [0] * max(0, N - lo + 1)

        def put(k, c):
            if lo <= k <= N and not _is_zero(c):
                out[k - lo] = out[k - lo] + c

        if center.kind == "infinity":
            for k, c in self.laurent.items():
                put(-k, c)
            for p in self.poles:
                # (w - p)^-m = u^m (1 - p u)^-m
                pk = Fraction(1)
                for j in range(0, N - p.order + 1):
                    put(p.order + j, _cl(p.coeff * comb(p.order + j - 1, j) * pk))
                    pk = pk * p.point
        elif center.kind == "zero":
            for k, c in self.laurent.items():
                put(k, c)
            for p in self.poles:
                # (w - p)^-m = (-p)^-m (1 - u/p)^-m
                inv = _cl(1 / p.point) if not isinstance(p.point, _SCALARS) else Fraction(1) / Fraction(p.point)
                base = _cl(p.coeff * ((-1) ** p.order) * _pow(inv, p.order))
                pk = Fraction(1)
                for j in range(0, N + 1):
                    put(j, _cl(base * comb(p.order + j - 1, j) * pk))
                    pk = _cl(pk * inv)
        else:
            q = center.point
            for k, c in self.laurent.items():
                if k >= 0:
                    for j in range(0, min(k, N) + 1):
                        put(j, _cl(c * comb(k, j) * _pow(q, k - j)))
                else:
                    qinv = _recip(q)
                    for j in range(0, N + 1):
                        put(j, _cl(c * _gbinom(k, j) * _pow(qinv, j - k)))
            for p in self.poles:
                if p.point == q:
                    put(-p.order, p.coeff)
                    continue
                dinv = _recip(q - p.point)
                m = p.order
                for j in range(0, N + 1):
                    put(j, _cl(p.coeff * ((-1) ** j) * comb(m + j - 1, j) * _pow(dinv, m + j)))
        return FormalSeries(lo, [_cl(c) for c in out], center)

    def to_ratfunc(self, var: str = "w"):
        from .core import W

        w = ExpPoly.var(W)
        total = as_ratfunc(0)
        for k, c in self.laurent.items():
            total = total + as_ratfunc(w**k) * c
        for p in self.poles:
            total = total + as_ratfunc(p.coeff) / (as_ratfunc(w - p.point) ** p.order)
        return total

    def eval_at(self, assignment: Mapping[str, object]) -> "PartialFractions":
        def ev(x):
            return x if isinstance(x, _SCALARS) else x.eval_exact(assignment)

        return PartialFractions(
            {k: ev(c) for k, c in self.laurent.items()},
            [Pole(ev(p.point), p.order, ev(p.coeff)) for p in self.poles],
        )


def _pow(x, n: int):
    if n == 0:
        return Fraction(1)
    return _cl(x**n)


def _recip(x):
    if isinstance(x, _SCALARS):
        if x == 0:
            raise DiscriminantError("coinciding points")
        return Fraction(1) / Fraction(x)
    if x == 0:
        raise DiscriminantError("coinciding points")
    return _cl(1 / x)


# one-forms --------------------------------------------------------------


@dataclass(frozen=True)
class OneForm:
    """density(w) dw for a rational density in w."""

    density: object

    def __post_init__(self) -> None:
        object.__setattr__(self, "density", as_ratfunc(self.density))


def residue(form: OneForm | object, center: Center, var: str = "w"):
    """Residue of density*dw at a center; at infinity w = 1/u, dw = -du/u^2."""
    f = form.density if isinstance(form, OneForm) else as_ratfunc(form)
    if center.kind == "infinity":
        s = laurent_expand(f, INFINITY, 1, var)
        return _cl(-s.coefficient(1))
    s = laurent_expand(f, center, -1, var)
    return _cl(s.coefficient(-1))


def omega_density(kind: str) -> PartialFractions:
    """phi^2 for the primary form phi dw; (-dw/w)^2 has density w^-2."""
    if kind == "dw":
        return PartialFractions({0: Fraction(1)})
    if kind == "-dw/w":
        return PartialFractions({-2: Fraction(1)})
    raise ValueError(f"unknown primary form {kind!r}; expected one of {OMEGA_KINDS}")


def check_distinct(points: Sequence) -> None:
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if points[i] == points[j]:
                raise DiscriminantError(f"points {i} and {j} coincide")


class CriticalSum:
    """Sums over critical points of lambda of products of PF factors.

    ``sum_{dlambda=0} Res  F_1 ... F_k phi^2 / lambda' dw`` is evaluated as minus
    the residues at infinity, zero (when present) and each pole of lambda.
    """

    def __init__(self, lam: PartialFractions, omega: str, factors: Sequence[PartialFractions], degree: int):
        self.lam = lam
        self.omega = omega
        self.factors = list(factors)
        self.degree = degree
        check_distinct(lam.centers())
        self.centers = [INFINITY]
        phi2 = omega_density(omega)
        if phi2.has_negative_powers() or lam.has_negative_powers() or any(f.has_negative_powers() for f in factors):
            self.centers.append(ZERO)
        self.centers += [finite(p) for p in lam.centers()]
        self._phi2 = phi2
        self._dlam = lam.derivative()
        self._local = {}
        for c in self.centers:
            self._local[c] = self._prepare(c, extra=0)

    def _prepare(self, center: Center, extra: int):
        vf = [f.lowest_exponent(center) for f in self.factors]
        vmin = min(vf) if vf else 0
        dl = self._dlam.lowest_exponent(center)
        vk = self._phi2.lowest_exponent(center) - dl
        if center.kind == "infinity":
            vk -= 2
        rel = max(0, -1 - vk - self.degree * vmin) + 1 + extra
        dser = self._dlam.expand(center, dl + rel).normalized()
        if dser.val != dl:
            raise DegenerateChartError(f"leading coefficient of lambda' vanishes at {center}")
        kern = self._phi2.expand(center, self._phi2.lowest_exponent(center) + rel) * dser.inverse()
        if center.kind == "infinity":
            kern = -kern.shift(-2)
        facs = [f.expand(center, v + rel) for f, v in zip(self.factors, vf)]
        return kern, facs

    def _center_value(self, center: Center, idx: tuple) -> object:
        kern, facs = self._local[center]
        prod = kern
        for i in idx[:-1]:
            prod = prod * facs[i]
        last = facs[idx[-1]]
        total = 0
        for k, c in prod.items():
            t = -1 - k
            if t < last.val:
                continue
            if t > last.N:
                raise PrecisionError("insufficient precision")
            d = last.coefficient(t)
            if not _is_zero(d):
                total = total + c * d
        return total

    def value(self, *idx: int):
        total = 0
        for c in self.centers:
            try:
                v = self._center_value(c, idx)
            except PrecisionError:
                self._local[c] = self._prepare(c, extra=2 * (self.degree + 2))
                v = self._center_value(c, idx)
            total = total + v
        return _cl(-total)


def residue_sum_over_critical(numerator, lam: PartialFractions, omega_kind: str):
    """Sum over critical points of lambda of Res numerator * phi^2 / lambda' dw.

    ``numerator`` is an ExpPoly in w, a PartialFractions, or a sequence of
    PartialFractions multiplied together.
    """
    if isinstance(numerator, (ExpPoly, *_SCALARS)):
        factors = [PartialFractions.from_expoly(ExpPoly.constant(numerator) if isinstance(numerator, _SCALARS) else numerator)]
    elif isinstance(numerator, PartialFractions):
        factors = [numerator]
    else:
        factors = list(numerator)
    cs = CriticalSum(lam, omega_kind, factors, len(factors))
    return cs.value(*range(len(factors)))
