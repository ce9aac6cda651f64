"""Prepotentials: base integration, the f-system, and tail assembly.

A prepotential is an exponential polynomial plus log atoms ``coeff * log(arg)``.
Logs are never expanded; derivatives turn them into rational functions, and a
third derivative of an atom with a quadratic-in-alpha coefficient has no log
left at all.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .charts import Family
from .core.expoly import ExpPoly, Generator, _SCALARS, exponential, ordinary
from .core.ratfunc import RatFunc, as_ratfunc, simplify
from .core.text import format_value, parse_expr, parse_with_logs
from .errors import NonIntegrableError
from .flat import FlatChart, alpha_gen, base_chart, beta_gen, full_flat_chart
from .invariants import power_sum


def _is_zero(x) -> bool:
    return x == 0


@dataclass(frozen=True)
class LogAtom:
    coeff: object
    arg: ExpPoly


def canonical_log_arg(arg: ExpPoly) -> tuple[ExpPoly, Fraction]:
    """Split arg = scale * g with g having leading coefficient +1."""
    if arg.is_zero():
        raise ValueError("log of zero")
    _, lc = arg.leading()
    return arg / lc, lc


class LogExpr:
    """rational + sum coeff_i * log(arg_i); used for derivatives of a prepotential."""

    __slots__ = ("rational", "logs")

    def __init__(self, rational=0, logs: Iterable[tuple] = ()):
        self.rational = rational
        merged: dict = {}
        order = []
        for c, a in logs:
            key = a
            if key in merged:
                merged[key] = merged[key] + c
            else:
                merged[key] = c
                order.append(key)
        self.logs = [(simplify(merged[a]) if isinstance(merged[a], (RatFunc, ExpPoly)) else merged[a], a)
                     for a in order if not _is_zero(merged[a])]

    def differentiate(self, var: Generator) -> "LogExpr":
        rat = _d(self.rational, var)
        logs = []
        for c, a in self.logs:
            dc = _d(c, var)
            if not _is_zero(dc):
                logs.append((dc, a))
            da = a.differentiate(var)
            if not _is_zero(da):
                rat = rat + as_ratfunc(c) * da / a
        return LogExpr(_simp(rat), logs)

    def has_logs(self) -> bool:
        return bool(self.logs)

    def value(self):
        if self.logs:
            raise ValueError("expression still contains logarithms")
        return self.rational


def _d(x, var: Generator):
    if isinstance(x, _SCALARS):
        return 0
    return _simp(x.differentiate(var))


def _simp(x):
    if isinstance(x, RatFunc):
        return simplify(x)
    return x


class Prepotential:
    """smooth ExpPoly plus a tuple of LogAtom."""

    def __init__(self, smooth: ExpPoly, logs: Sequence[LogAtom] = (), variables: Sequence[str] = ()):
        self.smooth = smooth
        self.logs = tuple(logs)
        self.variables = tuple(variables)

    def as_logexpr(self) -> LogExpr:
        return LogExpr(self.smooth, [(a.coeff, a.arg) for a in self.logs])

    def derivative(self, *vars: Generator | str) -> LogExpr:
        e = self.as_logexpr()
        for v in vars:
            e = e.differentiate(v if isinstance(v, Generator) else ordinary(v))
        return e

    def third_derivatives(self, names: Sequence[str]) -> dict:
        """F_ijk for sorted triples, as ExpPoly or RatFunc."""
        gens = [ordinary(n) for n in names]
        e0 = self.as_logexpr()
        first = [e0.differentiate(g) for g in gens]
        second = {}
        for i, j in itertools.combinations_with_replacement(range(len(gens)), 2):
            second[(i, j)] = first[i].differentiate(gens[j])
        out = {}
        for i, j, k in itertools.combinations_with_replacement(range(len(gens)), 3):
            out[(i, j, k)] = second[(i, j)].differentiate(gens[k]).value()
        return out

    def __add__(self, other: "Prepotential") -> "Prepotential":
        return Prepotential(self.smooth + other.smooth, self.logs + other.logs, self.variables or other.variables)

    def rename(self, mapping: Mapping[str, str]) -> "Prepotential":
        def rn(x):
            return x.rename(mapping) if isinstance(x, (ExpPoly, RatFunc)) else x

        return Prepotential(rn(self.smooth), [LogAtom(rn(a.coeff), rn(a.arg)) for a in self.logs],
                            [mapping.get(v, v) for v in self.variables])

    def to_dict(self) -> dict:
        return {
            "smooth": format_value(self.smooth),
            "logs": [{"coeff": format_value(a.coeff), "arg": format_value(a.arg)} for a in self.logs],
            "variables": list(self.variables),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Prepotential":
        smooth = parse_expr(d["smooth"])
        logs = [LogAtom(parse_expr(a["coeff"]), parse_expr(a["arg"])) for a in d.get("logs", [])]
        return cls(_as_poly(smooth), logs, d.get("variables", ()))

    @classmethod
    def from_text(cls, text: str, variables: Sequence[str] = ()) -> "Prepotential":
        smooth, logs = parse_with_logs(text)
        return cls(_as_poly(smooth), [LogAtom(c, a) for c, a in logs], variables)

    def to_latex(self) -> str:
        from .export import prepotential_latex

        return prepotential_latex(self)

    def __str__(self) -> str:
        parts = [format_value(self.smooth)] if self.smooth != 0 else []
        for a in self.logs:
            parts.append(f"({format_value(a.coeff)})*log({format_value(a.arg)})")
        return " + ".join(parts) if parts else "0"


def _as_poly(x) -> ExpPoly:
    if isinstance(x, ExpPoly):
        return x
    if isinstance(x, _SCALARS):
        return ExpPoly.constant(x)
    raise ValueError("smooth part must be an exponential polynomial")


# integration ----------------------------------------------------------------


def potential(grad: Sequence, gens: Sequence[Generator]) -> ExpPoly:
    """P with dP/dx_i = grad[i]; raises NonIntegrableError when not closed."""
    P = ExpPoly.constant(0)
    for i, g in enumerate(gens):
        rem = _as_poly(grad[i]) - P.differentiate(g)
        for h in gens[:i]:
            if rem.depends_on(h.name):
                raise NonIntegrableError(f"gradient is not closed: component {g.name} depends on {h.name}")
        P = P + rem.integrate(g)
    for i, g in enumerate(gens):
        if P.differentiate(g) != _as_poly(grad[i]):
            raise NonIntegrableError(f"gradient is not closed in {g.name}")
    return P


def drop_quadratics(p: ExpPoly, names: Iterable[str] | None = None) -> ExpPoly:
    """Remove monomials free of exponentials and of total degree <= 2."""
    keep = {}
    for e, c in p.terms.items():
        if any(x for g, x in zip(p.gens, e) if g.is_exponential):
            keep[e] = c
        elif sum(e) > 2:
            keep[e] = c
    return ExpPoly(p.gens, keep)


def drop_affine(p: ExpPoly) -> ExpPoly:
    keep = {e: c for e, c in p.terms.items()
            if any(x for g, x in zip(p.gens, e) if g.is_exponential) or sum(e) > 1}
    return ExpPoly(p.gens, keep)


def integrate_base(c: Mapping[tuple, object], gens: Sequence[Generator]) -> ExpPoly:
    """F with d^3F = c (entries keyed by sorted index triples), normalized mod quadratics."""
    n = len(gens)
    if n == 0:
        return ExpPoly.constant(0)

    def entry(i, j, k):
        v = c[tuple(sorted((i, j, k)))]
        if isinstance(v, RatFunc):
            if not v.is_polynomial():
                raise NonIntegrableError("three-point entry is not polynomial")
            v = v.as_expoly()
        return _as_poly(v)

    second = {}
    for i in range(n):
        for j in range(i, n):
            second[(i, j)] = potential([entry(i, j, k) for k in range(n)], gens)
    first = [potential([second[tuple(sorted((i, j)))] for j in range(n)], gens) for i in range(n)]
    F = potential(first, gens)
    return drop_quadratics(F)


def base_prepotential(family: Family) -> ExpPoly:
    """F of the base (tail-free) structure from its residue three-point tensor."""
    from .tensors import three_point

    chart = base_chart(family)
    if not chart.base_coords:
        return ExpPoly.constant(0)
    c = three_point(chart)
    return integrate_base(c, chart.base_coords)


# the f-system -----------------------------------------------------------------


def _q_polynomial(family: Family, sigma: Sequence[ExpPoly]) -> list:
    """Coefficients (low to high) of Q(w) = w^l lambda'(1/w) for the base lambda."""
    l = family.ell
    deg = {}
    deg[0] = Fraction(l + 1)
    for k, s in enumerate(sigma):
        p = family.sigma_power(k)
        if p == 0:
            continue
        # p s w^(p-1) -> w^l * p s w^(1-p)
        deg[l + 1 - p] = deg.get(l + 1 - p, 0) + s * p
    top = max(deg)
    return [deg.get(i, 0) for i in range(top + 1)]


def _inv_series(q: list, n: int) -> list:
    q0 = q[0]
    out = [Fraction(1) / q0]
    for m in range(1, n):
        acc = 0
        for k in range(1, min(m, len(q) - 1) + 1):
            if not _is_zero(q[k]):
                acc = acc + q[k] * out[m - k]
        out.append(-acc / q0)
    return out


def f_hessian_rhs(family: Family, chart: FlatChart | None = None) -> list[list[ExpPoly]]:
    """Right-hand side f_ab of the second-order system, in flat coordinates."""
    chart = chart or base_chart(family)
    l, r = family.ell, family.r
    sig_syms = [ExpPoly.var(ordinary(f"sigma_{k}")) for k in range(len(chart.sigma_of_t))]
    if family.kind == "A":
        idx = list(range(l))
        Q = _q_polynomial(family, sig_syms)
        def coeff_index(p, q):
            return p + q - l
    else:
        idx = list(range(l + r + 1))
        Q = _q_polynomial(family, sig_syms)
        def coeff_index(p, q):
            return p + q - l - 2 * r - 1
    top = max((coeff_index(p, q) for p in idx for q in idx), default=-1)
    inv = _inv_series(Q, top + 1) if top >= 0 else []
    sub = {f"sigma_{k}": s for k, s in enumerate(chart.sigma_of_t)}
    res = {}
    for p in idx:
        for q in idx:
            ci = coeff_index(p, q)
            v = inv[ci] if 0 <= ci < len(inv) else 0
            res[(p, q)] = _as_poly(v).subs(sub) if not isinstance(v, _SCALARS) else Fraction(v)
    gens = chart.base_coords
    n = len(gens)
    jac = [[chart.sigma_of_t[p].differentiate(g) if isinstance(chart.sigma_of_t[p], ExpPoly) else 0 for g in gens]
           for p in range(len(chart.sigma_of_t))]
    out = [[ExpPoly.constant(0)] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = ExpPoly.constant(0)
            for p in idx:
                if jac[p][a] == 0:
                    continue
                for q in idx:
                    if jac[q][b] == 0 or res[(p, q)] == 0:
                        continue
                    acc = acc + jac[p][a] * jac[q][b] * res[(p, q)]
            out[a][b] = acc
    return out


def solve_f(family: Family, chart: FlatChart | None = None, *, check_orders: bool = True) -> ExpPoly:
    """Solve f_ab = rhs_ab; the affine part is set to zero."""
    chart = chart or base_chart(family)
    gens = chart.base_coords
    if not gens:
        return ExpPoly.constant(0)
    H = f_hessian_rhs(family, chart)
    n = len(gens)
    for a in range(n):
        for b in range(n):
            if H[a][b] != H[b][a]:
                raise NonIntegrableError("f-system right-hand side is not symmetric")
    grads = [potential(H[a], gens) for a in range(n)]
    f1 = drop_affine(potential(grads, gens))
    if check_orders:
        rev = list(reversed(gens))
        Hr = [[H[n - 1 - a][n - 1 - b] for b in range(n)] for a in range(n)]
        grads_r = [potential(Hr[a], rev) for a in range(n)]
        f2 = drop_affine(potential(grads_r, rev))
        if f1 != f2:
            raise NonIntegrableError("integration orders disagree beyond affine terms")
    return f1


# assembly -------------------------------------------------------------------------


def _tail_logs(family: Family) -> list[LogAtom]:
    n_p = family.n_poles
    logs = []
    for m in range(1, n_p + 1):
        a = ExpPoly.var(alpha_gen(m))
        logs.append(LogAtom(a * a * Fraction(1, 2), a))
    for m, n in itertools.combinations(range(1, n_p + 1), 2):
        coeff = ExpPoly.var(alpha_gen(m)) * ExpPoly.var(alpha_gen(n))
        if family.kind == "A":
            arg = ExpPoly.var(beta_gen(m)) - ExpPoly.var(beta_gen(n))
        else:
            arg = ExpPoly.var(exponential(beta_gen(m).name)) - ExpPoly.var(exponential(beta_gen(n).name))
        logs.append(LogAtom(coeff, arg))
    return logs


def assemble_A(ell: int, n_poles: int, *, base: ExpPoly | None = None) -> Prepotential:
    fam = Family("A", ell, 0, n_poles)
    chart = full_flat_chart(fam)
    F0 = base if base is not None else base_prepotential(Family("A", ell))
    f = solve_f(Family("A", ell))
    smooth = F0 + power_sum(1, ell + 2, n_poles) * Fraction(1, ell + 2) + f * power_sum(1, 0, n_poles)
    for p, s in enumerate(chart.sigma_of_t):
        smooth = smooth + s * power_sum(1, p + 1, n_poles) * Fraction(1, p + 1)
    return Prepotential(smooth, _tail_logs(fam), chart.names)


def assemble_EAW(ell: int, r: int, n_poles: int, *, base: ExpPoly | None = None) -> Prepotential:
    fam = Family("EAW", ell, r, n_poles)
    chart = full_flat_chart(fam)
    sig = chart.sigma_of_t
    sr = sig[r]
    if sr.total_degree() > 1 or any(g.is_exponential for g in sr.used()):
        raise NonIntegrableError("sigma_r is not an affine function of the flat coordinates")
    F0 = base if base is not None else base_prepotential(Family("EAW", ell, r))
    f = solve_f(Family("EAW", ell, r))
    smooth = F0 + power_sum(1, ell + 1, n_poles, exponential_kind=True) * Fraction(1, ell + 1)
    for k in range(1, ell + 1):
        smooth = smooth + sig[r + k] * power_sum(1, k, n_poles, exponential_kind=True) * Fraction(1, k)
    smooth = smooth + f * power_sum(1, 0, n_poles, exponential_kind=True)
    for k in range(1, r + 1):
        smooth = smooth - sig[r - k] * power_sum(1, -k, n_poles, exponential_kind=True) * Fraction(1, k)
    smooth = smooth + sr * power_sum(1, 1, n_poles) + power_sum(2, 1, n_poles) * Fraction(1, 2)
    return Prepotential(smooth, _tail_logs(fam), chart.names)


def assemble(family: Family) -> Prepotential:
    if family.kind == "A":
        return assemble_A(family.ell, family.n_poles)
    return assemble_EAW(family.ell, family.r, family.n_poles)
