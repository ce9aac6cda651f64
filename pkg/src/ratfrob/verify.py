"""Exact checks of WDVV, quasi-homogeneity, unity, metric flatness and golden data.

Pointwise checks evaluate exactly at seeded random rational points.
Exponential generators get values independent of their bases.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core.expoly import ExpPoly, _SCALARS, ordinary
from .core.ratfunc import RatFunc, as_ratfunc, simplify
from .core.text import format_value
from .errors import (
    CheckFailure,
    DiscriminantError,
    HomogeneityViolation,
    PoleHit,
    StructuralMismatch,
    WdvvViolation,
)


@dataclass(frozen=True)
class VerifyConfig:
    points: int = 20
    seed: int = 0
    H: int = 50
    max_denominator: int = 7
    max_resample: int = 200


@dataclass
class Report:
    check: str
    instance: str
    points: int
    passed: bool
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"check": self.check, "instance": self.instance, "points": self.points, "passed": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        if self.details:
            d["details"] = self.details
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _to_report(check: str, instance: str, points: int, exc: CheckFailure) -> Report:
    return Report(check, instance, points, False, _jsonable(exc.witness))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, ExpPoly, RatFunc)):
        return format_value(x)
    return x


# sampling -----------------------------------------------------------------


def random_rational(rng: random.Random, H: int, max_den: int) -> Fraction:
    while True:
        n = rng.randint(-H, H)
        if n:
            return Fraction(n, rng.randint(1, max_den))


def sample_values(names: Sequence[str], rng: random.Random, H: int = 50, max_den: int = 7,
                  distinct: Iterable[Sequence[str]] = ()) -> dict[str, Fraction]:
    """Nonzero random rationals; each group in ``distinct`` gets pairwise distinct values."""
    groups = [list(g) for g in distinct]
    while True:
        vals = {n: random_rational(rng, H, max_den) for n in names}
        if all(len({vals[n] for n in g}) == len(g) for g in groups):
            return vals


def point_names(chart) -> tuple[list[str], list[list[str]]]:
    """Names to sample for a flat chart and the groups that must stay distinct."""
    names = list(chart.names)
    n_p = chart.family.n_poles
    if chart.family.kind == "EAW":
        names.append(f"E[{chart.base_coords[chart.bullet].name}]")
        names += [f"E[beta_{m}]" for m in range(1, n_p + 1)]
        groups = [[f"E[beta_{m}]" for m in range(1, n_p + 1)]]
    else:
        groups = [[f"beta_{m}" for m in range(1, n_p + 1)]]
    return names, groups


def sample_point(chart, rng: random.Random, config: VerifyConfig | None = None) -> dict[str, Fraction]:
    cfg = config or VerifyConfig()
    names, groups = point_names(chart)
    return sample_values(names, rng, cfg.H, cfg.max_denominator, groups)


def names_for_expressions(exprs: Iterable) -> list[str]:
    out: set[str] = set()
    for e in exprs:
        if isinstance(e, (ExpPoly, RatFunc)):
            out |= e.free_names()
    return sorted(out)


def _exp_groups(names: Sequence[str]) -> list[list[str]]:
    betas = sorted(n for n in names if n.startswith("beta_"))
    ebetas = sorted(n for n in names if n.startswith("E[beta_"))
    return [g for g in (betas, ebetas) if len(g) > 1]


def _ev(x, point):
    return Fraction(x) if isinstance(x, _SCALARS) else x.eval_exact(point)


# linear algebra -----------------------------------------------------------


def invert(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Exact Gauss-Jordan inverse."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [v * inv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


def _matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    return [[sum((A[i][k] * B[k][j] for k in range(m) if A[i][k] and B[k][j]), Fraction(0)) for j in range(p)]
            for i in range(n)]


def _third_matrices(third: Mapping[tuple, object], n: int, point) -> list[list[list[Fraction]]]:
    vals = {k: _ev(v, point) for k, v in third.items()}
    return [[[vals[tuple(sorted((p, a, b)))] for b in range(n)] for a in range(n)] for p in range(n)]


def wdvv_residual(M: Sequence, G: Sequence) -> tuple | None:
    """First (p, q, r, s, value) with M_q G M_r != M_r G M_q at this point."""
    n = len(G)
    GM = [_matmul(G, M[r]) for r in range(n)]
    for q in range(n):
        for r in range(q + 1, n):
            S = _matmul(M[q], GM[r])
            for p in range(n):
                for s in range(n):
                    if S[p][s] != S[s][p]:
                        # S[p][s] = F_pqa eta^ab F_brs ; S[s][p] = F_sqa eta^ab F_brp
                        return (p, q, r, s, S[p][s] - S[s][p])
    return None


# WDVV -----------------------------------------------------------------------


def wdvv_check(F, eta: Sequence[Sequence] | None = None, config: VerifyConfig | None = None,
               names: Sequence[str] | None = None, instance: str = "", *, raise_on_fail: bool = False,
               point_sampler=None) -> Report:
    """Exact WDVV at random points; eta defaults to F_{1ab} when that is constant."""
    cfg = config or VerifyConfig()
    names = list(names or F.variables)
    n = len(names)
    third = F.third_derivatives(names)
    if eta is None:
        eta = _eta_from_first(third, n)
    G = invert(eta)
    rng = random.Random(cfg.seed)
    all_names = names_for_expressions(third.values())
    checked = 0
    done = 0
    tries = 0
    while done < cfg.points:
        tries += 1
        if tries > cfg.max_resample + cfg.points:
            raise PoleHit("could not find enough regular sample points")
        point = point_sampler(rng) if point_sampler else sample_values(
            sorted(set(all_names) | set(names)), rng, cfg.H, cfg.max_denominator, _exp_groups(all_names))
        try:
            M = _third_matrices(third, n, point)
        except (PoleHit, ZeroDivisionError):
            continue
        done += 1
        bad = wdvv_residual(M, G)
        checked += n * n * max(0, n * (n - 1) // 2)
        if bad:
            p, q, r, s, val = bad
            exc = WdvvViolation("WDVV fails", {
                "point": {k: str(v) for k, v in sorted(point.items())},
                "tuple": [names[p], names[q], names[r], names[s]], "value": str(val)})
            if raise_on_fail:
                raise exc
            return _to_report("wdvv", instance, done, exc)
    return Report("wdvv", instance, done, True, details={"tuples_checked": checked, "dimension": n})


def _eta_from_first(third: Mapping[tuple, object], n: int) -> list[list[Fraction]]:
    eta = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            v = simplify(third[tuple(sorted((0, a, b)))])
            if not isinstance(v, _SCALARS):
                raise ValueError("F_{1ab} is not constant; pass eta explicitly")
            eta[a][b] = Fraction(v)
    return eta


# homogeneity -------------------------------------------------------------------


def lie_euler(F, euler: Sequence[tuple], names: Sequence[str]):
    """(rational, logs) of E(F) with E = sum (w_i x_i + s_i) d_i."""
    from .prepotential import LogExpr

    rational = as_ratfunc(0)
    logs: list = []
    base = F.as_logexpr()
    for (w, s), name in zip(euler, names):
        if not w and not s:
            continue
        d = base.differentiate(ordinary(name))
        x = ExpPoly.var(ordinary(name))
        factor = x * w + s
        rational = rational + as_ratfunc(d.rational) * factor
        logs += [(c * factor, a) for c, a in d.logs]
    return LogExpr(simplify(rational), logs)


def _non_quadratic_terms(p: ExpPoly) -> list[str]:
    from .core.text import format_monomial

    bad = []
    for e, c in p.sorted_terms():
        if any(x for g, x in zip(p.gens, e) if g.is_exponential) or sum(e) > 2 or any(x < 0 for x in e):
            bad.append(f"{c}*{format_monomial(p.gens, e)}")
    return bad


def homogeneity_check(F, euler: Sequence[tuple], d, names: Sequence[str] | None = None,
                      instance: str = "", *, raise_on_fail: bool = False) -> Report:
    """Lie_E F - (3-d) F must be a polynomial of degree <= 2 (symbolic)."""
    from .prepotential import LogExpr

    names = list(names or F.variables)
    k = 3 - Fraction(d)
    E = lie_euler(F, euler, names)
    base = F.as_logexpr()
    rest = LogExpr(simplify(as_ratfunc(E.rational) - as_ratfunc(base.rational) * k),
                   E.logs + [(c * (-k), a) for c, a in base.logs])
    problem = None
    if rest.logs:
        problem = {"log_terms": [f"({format_value(c)})*log({format_value(a)})" for c, a in rest.logs]}
    else:
        r = rest.rational
        if isinstance(r, RatFunc) and not r.is_polynomial():
            problem = {"remainder": format_value(r)}
        else:
            poly = r if isinstance(r, ExpPoly) else ExpPoly.constant(r) if isinstance(r, _SCALARS) else r.as_expoly()
            bad = _non_quadratic_terms(poly)
            if bad:
                problem = {"monomials": bad}
    if problem:
        exc = HomogeneityViolation("Lie_E F - (3-d) F is not at most quadratic", problem)
        if raise_on_fail:
            raise exc
        return _to_report("homogeneity", instance, 0, exc)
    return Report("homogeneity", instance, 0, True, details={"degree": str(k)})


# golden comparison ----------------------------------------------------------------


def _log_key(arg: ExpPoly) -> ExpPoly:
    from .prepotential import canonical_log_arg

    return canonical_log_arg(arg)[0]


def log_multiset(F) -> dict:
    out: dict = {}
    for a in F.logs:
        key = _log_key(a.arg)
        out[key] = simplify(as_ratfunc(out.get(key, 0)) + a.coeff)
    return {k: v for k, v in out.items() if v != 0}


def compare_mod_quadratics(F, reference, instance: str = "", *, raise_on_fail: bool = False) -> Report:
    """F - reference: smooth part of degree <= 2 and identical log atoms up to scaling of arguments.

    Rescaling a log argument shifts F by coeff*log(c), which is quadratic in alpha.
    """
    diff = F.smooth - reference.smooth
    bad = _non_quadratic_terms(diff)
    la, lb = log_multiset(F), log_multiset(reference)
    logs_bad = []
    for key in sorted(set(la) | set(lb), key=str):
        if la.get(key, 0) != lb.get(key, 0):
            logs_bad.append({"arg": format_value(key), "built": format_value(la.get(key, 0)),
                             "reference": format_value(lb.get(key, 0))})
    if bad or logs_bad:
        exc = StructuralMismatch("prepotentials differ beyond quadratic terms",
                                 {"smooth_terms": bad, "log_terms": logs_bad})
        if raise_on_fail:
            raise exc
        return _to_report("compare_mod_quadratics", instance, 0, exc)
    return Report("compare_mod_quadratics", instance, 0, True)


# structure checks -------------------------------------------------------------------


def metric_block_check(chart, config: VerifyConfig | None = None, instance: str = "", symbolic: bool = True) -> Report:
    """eta from residues equals the block form; symbolically or at sample points."""
    from .tensors import metric

    expected = chart.eta()
    if symbolic:
        got = metric(chart)
        mism = [(i, j) for i in range(chart.dim) for j in range(chart.dim) if simplify(got[i][j]) != expected[i][j]]
        if mism:
            i, j = mism[0]
            return Report("metric_block", instance, 0, False,
                          {"entry": [chart.names[i], chart.names[j]], "value": format_value(got[i][j])})
        return Report("metric_block", instance, 0, True, details={"mode": "symbolic"})
    cfg = config or VerifyConfig()
    rng = random.Random(cfg.seed)
    for k in range(cfg.points):
        point = sample_point(chart, rng, cfg)
        got = metric(chart, point=point)
        if got != expected:
            return Report("metric_block", instance, k + 1, False, {"point": {a: str(b) for a, b in point.items()}})
    return Report("metric_block", instance, cfg.points, True, details={"mode": "points"})


def _tensor_at(third: Mapping[tuple, object], point) -> dict:
    return {k: _ev(v, point) for k, v in third.items()}


def residue_agreement_check(F, chart, config: VerifyConfig | None = None, instance: str = "",
                            third: Mapping | None = None) -> Report:
    """d^3 F agrees with the residue three-point tensor at sample points."""
    from .tensors import three_point

    cfg = config or VerifyConfig()
    third = third if third is not None else F.third_derivatives(chart.names)
    rng = random.Random(cfg.seed)
    done = 0
    while done < cfg.points:
        point = sample_point(chart, rng, cfg)
        try:
            fv = _tensor_at(third, point)
            rv = three_point(chart, point=point)
        except (PoleHit, ZeroDivisionError, DiscriminantError):
            continue
        done += 1
        for key in fv:
            if fv[key] != Fraction(rv[key]):
                return Report("residue_agreement", instance, done, False, {
                    "indices": [chart.names[i] for i in key], "prepotential": str(fv[key]),
                    "residue": str(rv[key]), "point": {a: str(b) for a, b in point.items()}})
    return Report("residue_agreement", instance, done, True)


def unity_check(F, chart, config: VerifyConfig | None = None, instance: str = "",
                third: Mapping | None = None) -> Report:
    """c(e, a, b) = eta_ab with e the unity field, from the prepotential."""
    cfg = config or VerifyConfig()
    third = third if third is not None else F.third_derivatives(chart.names)
    e = chart.unity()
    eta = chart.eta()
    n = chart.dim
    rng = random.Random(cfg.seed + 1)
    for k in range(cfg.points):
        point = sample_point(chart, rng, cfg)
        fv = _tensor_at(third, point)
        for a in range(n):
            for b in range(a, n):
                v = sum((e[i] * fv[tuple(sorted((i, a, b)))] for i in range(n) if e[i]), Fraction(0))
                if v != eta[a][b]:
                    return Report("unity", instance, k + 1, False,
                                  {"indices": [chart.names[a], chart.names[b]], "value": str(v)})
    return Report("unity", instance, cfg.points, True)


def associativity_check(chart, config: VerifyConfig | None = None, instance: str = "") -> Report:
    """Residue structure constants commute pairwise (associativity, no prepotential involved)."""
    from .tensors import three_point

    cfg = config or VerifyConfig()
    G = invert(chart.eta())
    n = chart.dim
    rng = random.Random(cfg.seed + 2)
    for k in range(cfg.points):
        point = sample_point(chart, rng, cfg)
        c = {key: Fraction(v) for key, v in three_point(chart, point=point).items()}
        M = [[[c[tuple(sorted((p, a, b)))] for b in range(n)] for a in range(n)] for p in range(n)]
        bad = wdvv_residual(M, G)
        if bad:
            return Report("associativity", instance, k + 1, False,
                          {"tuple": [chart.names[i] for i in bad[:4]], "value": str(bad[4])})
    return Report("associativity", instance, cfg.points, True)


def verify_structure(F, chart, config: VerifyConfig | None = None, instance: str = "",
                     symbolic_metric: bool = False) -> list[Report]:
    """The full suite for an assembled structure in its flat chart."""
    cfg = config or VerifyConfig()
    names = chart.names
    third = F.third_derivatives(names)
    sampler = lambda rng: sample_point(chart, rng, cfg)  # noqa: E731
    return [
        metric_block_check(chart, cfg, instance, symbolic=symbolic_metric),
        wdvv_check(F, chart.eta(), cfg, names, instance, point_sampler=sampler),
        homogeneity_check(F, chart.euler(), chart.charge(), names, instance),
        unity_check(F, chart, cfg, instance, third),
        residue_agreement_check(F, chart, cfg, instance, third),
    ]
