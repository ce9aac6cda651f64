"""Flat coordinates for the base polynomial / Laurent superpotentials and their tails.

Base charts come from fractional powers of lambda:

* family A, ``n = l+1``:  t_a = (n/j) [w^-1] (lambda^(1/n))^j  with j = n - a;
* family EAW: ``t_j = ((l+1)/j) [w^0] (lambda^(1/(l+1)))^j`` at infinity for
  j = 1..l, ``t_star = sigma_r``, ``(r/j) [w^0] (lambda^(1/r))^j`` at zero for
  j = 1..r-1, and ``t_bullet`` with ``sigma_0 = e^(r t_bullet)``.

Each map is triangular, so it is inverted by back-substitution.  The metric
in the resulting chart is recomputed with the residue engine and must be a
constant matrix; anything else raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .charts import Family
from .core import W
from .core.expoly import ExpPoly, Generator, exponential, ordinary
from .core.series import ZERO, puiseux_root, series_root
from .errors import DegenerateChartError
from .residues import CriticalSum, PartialFractions, Pole


def sigma_gen(k: int) -> Generator:
    return ordinary(f"sigma_{k}")


def t_gen(a: int) -> Generator:
    return ordinary(f"t_{a}")


def alpha_gen(m: int) -> Generator:
    return ordinary(f"alpha_{m}")


def beta_gen(m: int) -> Generator:
    return ordinary(f"beta_{m}")


def _var(g: Generator) -> ExpPoly:
    return ExpPoly.var(g)


@dataclass(frozen=True)
class FlatChart:
    """Flat chart (t, alpha, beta) for a family together with Euler data.

    ``sigma_of_t[k]`` expresses the division-chart coefficient sigma_k of the
    base part in flat coordinates; ``t_of_sigma`` is the forward map.  For EAW
    the exponential generator ``E[t_bullet]`` stands in for sigma_0.
    """

    family: Family
    omega: str
    base_coords: tuple
    sigma_of_t: tuple
    t_of_sigma: tuple
    weights: tuple
    shifts: tuple
    eta_base: tuple
    star: int | None = None
    bullet: int | None = None

    # coordinates -----------------------------------------------------
    @property
    def alphas(self) -> tuple:
        return tuple(alpha_gen(m) for m in range(1, self.family.n_poles + 1))

    @property
    def betas(self) -> tuple:
        return tuple(beta_gen(m) for m in range(1, self.family.n_poles + 1))

    @property
    def coords(self) -> tuple:
        return self.base_coords + self.alphas + self.betas

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.coords]

    @property
    def dim(self) -> int:
        return len(self.coords)

    def eta(self) -> list[list[Fraction]]:
        """eta_base plus the antidiagonal identity block on (alpha, beta)."""
        nb = len(self.base_coords)
        n_p = self.family.n_poles
        n = self.dim
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(nb):
            for j in range(nb):
                out[i][j] = self.eta_base[i][j]
        for m in range(n_p):
            out[nb + m][nb + n_p + m] = Fraction(1)
            out[nb + n_p + m][nb + m] = Fraction(1)
        return out

    def euler(self) -> list[tuple[Fraction, Fraction]]:
        """(weight, shift) per coordinate: E = sum (weight x + shift) d/dx."""
        f = self.family
        n_p = f.n_poles
        if f.kind == "A":
            wa = Fraction(f.ell + 2, f.ell + 1)
            wb = (Fraction(1, f.ell + 1), Fraction(0))
            tail = [(wa, Fraction(0))] * n_p + [wb] * n_p
        else:
            tail = [(Fraction(1), Fraction(0))] * n_p + [(Fraction(0), Fraction(1, f.ell + 1))] * n_p
        return list(zip(self.weights, self.shifts)) + tail

    def charge(self) -> Fraction:
        f = self.family
        if f.kind == "A":
            return Fraction(f.ell - 1, f.ell + 1) if f.ell else Fraction(-1)
        return Fraction(1)

    def unity(self) -> list[Fraction]:
        """Constant coefficients of the unity field in ``coords`` order."""
        f = self.family
        out = [Fraction(0)] * self.dim
        if f.kind == "A" and f.ell == 0:
            nb = len(self.base_coords)
            for m in range(f.n_poles):
                out[nb + f.n_poles + m] = Fraction(1)
        elif f.kind == "A":
            out[0] = Fraction(1)
        else:
            out[self.star] = Fraction(1)
        return out

    # superpotential -----------------------------------------------------
    def exp_beta(self, m: int) -> ExpPoly:
        return ExpPoly.var(exponential(beta_gen(m).name))

    def lambda_pf(self) -> PartialFractions:
        f = self.family
        lau: dict[int, object] = {f.ell + 1: Fraction(1)}
        for k, s in enumerate(self.sigma_of_t):
            if s != 0:
                kk = f.sigma_power(k)
                lau[kk] = lau.get(kk, 0) + s
        poles = []
        for m in range(1, f.n_poles + 1):
            a = _var(alpha_gen(m))
            if f.kind == "A":
                poles.append(Pole(_var(beta_gen(m)), 1, a))
            else:
                E = self.exp_beta(m)
                lau[0] = lau.get(0, 0) + a
                poles.append(Pole(E, 1, a * E))
        return PartialFractions(lau, poles)

    def partials_pf(self) -> list[PartialFractions]:
        f = self.family
        out = []
        for g in self.base_coords:
            lau = {}
            for k, s in enumerate(self.sigma_of_t):
                d = s.differentiate(g) if isinstance(s, ExpPoly) else 0
                if d != 0:
                    kk = f.sigma_power(k)
                    lau[kk] = lau.get(kk, 0) + d
            out.append(PartialFractions(lau))
        for m in range(1, f.n_poles + 1):
            if f.kind == "A":
                out.append(PartialFractions({}, [Pole(_var(beta_gen(m)), 1, Fraction(1))]))
            else:
                E = self.exp_beta(m)
                out.append(PartialFractions({0: Fraction(1)}, [Pole(E, 1, E)]))
        for m in range(1, f.n_poles + 1):
            a = _var(alpha_gen(m))
            if f.kind == "A":
                out.append(PartialFractions({}, [Pole(_var(beta_gen(m)), 2, a)]))
            else:
                E = self.exp_beta(m)
                out.append(PartialFractions({}, [Pole(E, 1, a * E), Pole(E, 2, a * E * E)]))
        return out

    def lambda_flat(self):
        return self.lambda_pf().to_ratfunc()

    def sigma_json(self) -> dict[str, str]:
        from .core.text import format_value

        return {f"sigma_{k}": format_value(s) for k, s in enumerate(self.sigma_of_t)}

    def with_tail(self, n_poles: int) -> "FlatChart":
        f = self.family
        fam = Family(f.kind, f.ell, f.r, n_poles)
        return FlatChart(fam, self.omega, self.base_coords, self.sigma_of_t, self.t_of_sigma,
                         self.weights, self.shifts, self.eta_base, self.star, self.bullet)


# base charts --------------------------------------------------------------


def _invert_triangular(forward: Sequence[tuple[int, ExpPoly]], lead: Mapping[int, ExpPoly],
                       coords: Sequence[Generator], fixed: Mapping[int, ExpPoly]) -> dict[int, ExpPoly]:
    """Solve t_i = lead_i * sigma_{k_i} + R_i(sigma) for sigma_k(t), in the given order.

    ``forward`` lists (k_i, t_i(sigma)) in solving order; ``lead[k]`` is the
    invertible monomial factor multiplying sigma_k; ``fixed`` holds sigma's
    already known in t.
    """
    known = dict(fixed)
    for (k, expr), g in zip(forward, coords):
        sk = sigma_gen(k)
        lin = expr.differentiate(sk)
        if lin != lead[k] or lin.differentiate(sk) != 0:
            raise DegenerateChartError(f"flat coordinate {g.name} is not triangular in sigma_{k}")
        rest = expr - lead[k] * _var(sk)
        bad = [n for n in rest.free_names() if n.startswith("sigma_") and int(n[6:]) not in known]
        if bad:
            raise DegenerateChartError(f"flat coordinate {g.name} depends on unsolved {bad}")
        rest_t = rest.subs({f"sigma_{j}": v for j, v in known.items()})
        if any(n.startswith("sigma_") for n in lead[k].free_names()) or not lead[k].is_laurent_monomial():
            raise DegenerateChartError(f"leading factor of sigma_{k} is not an invertible monomial")
        known[k] = (_var(g) - rest_t) * lead[k].monomial_inverse()
    return known


def _constant_matrix(rows) -> tuple:
    out = []
    for row in rows:
        r = []
        for v in row:
            if isinstance(v, Fraction) or isinstance(v, int):
                r.append(Fraction(v))
            elif isinstance(v, ExpPoly) and v.is_constant():
                r.append(v.constant_value())
            else:
                raise DegenerateChartError(f"metric entry {v} is not constant")
        out.append(tuple(r))
    return tuple(out)


def _metric_from(chart_like_lambda: PartialFractions, partials, omega: str) -> tuple:
    n = len(partials)
    cs = CriticalSum(chart_like_lambda, omega, partials, 2)
    rows = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = cs.value(i, j)
            rows[i][j] = rows[j][i] = v
    return _constant_matrix(rows)


def _weights_of(expr: ExpPoly, deg: Mapping[str, Fraction]) -> Fraction:
    ws = expr.weighted_degrees(deg)
    if len(ws) != 1:
        raise DegenerateChartError(f"{expr} is not quasi-homogeneous")
    return ws.pop()


@lru_cache(maxsize=None)
def saito_flat_A(ell: int) -> FlatChart:
    """Flat coordinates of the polynomial superpotential w^(l+1) + sigma_{l-1} w^(l-1) + ... + sigma_0."""
    fam = Family("A", ell, 0, 0)
    if ell == 0:
        return FlatChart(fam, "dw", (), (), (), (), (), ())
    n = ell + 1
    w = _var(W)
    lam = w**n
    for k in range(ell):
        lam = lam + _var(sigma_gen(k)) * w**k
    root = puiseux_root(lam, n, ell + 1)
    coords = tuple(t_gen(a) for a in range(1, ell + 1))
    forward_all = []
    for a in range(1, ell + 1):
        j = n - a
        P = root**j
        forward_all.append((a - 1, P.coefficient(1) * Fraction(n, j)))
    order = sorted(range(ell), key=lambda i: -forward_all[i][0])
    one = ExpPoly.constant(1)
    sol = _invert_triangular([forward_all[i] for i in order], {k: one for k in range(ell)},
                             [coords[i] for i in order], {})
    sigma_of_t = tuple(sol[k] for k in range(ell))
    sdeg = {f"sigma_{k}": Fraction(n - k, n) for k in range(ell)}
    weights = tuple(_weights_of(e, sdeg) for _, e in forward_all)
    chart = FlatChart(fam, "dw", coords, sigma_of_t, tuple(e for _, e in forward_all), weights,
                      (Fraction(0),) * ell, ())
    eta = _metric_from(chart.lambda_pf(), chart.partials_pf(), "dw")
    return _replace_eta(chart, eta)


def _replace_eta(chart: FlatChart, eta: tuple) -> FlatChart:
    return FlatChart(chart.family, chart.omega, chart.base_coords, chart.sigma_of_t, chart.t_of_sigma,
                     chart.weights, chart.shifts, eta, chart.star, chart.bullet)


@lru_cache(maxsize=None)
def dz_flat_EAW(ell: int, r: int) -> FlatChart:
    """Flat coordinates of w^(l+1) + sigma_{l+r} w^l + ... + sigma_1 w^(1-r) + e^(r t_bullet) w^-r."""
    fam = Family("EAW", ell, r, 0)
    n_base = ell + r + 1
    bullet = t_gen(n_base)
    E = ExpPoly.var(exponential(bullet.name))
    w = _var(W)
    lam = w ** (ell + 1) + E**r * w ** (-r)
    for k in range(1, ell + r + 1):
        lam = lam + _var(sigma_gen(k)) * w ** (k - r)
    forward = {}
    if ell:
        root_inf = puiseux_root(lam, ell + 1, ell + 1)
        for j in range(1, ell + 1):
            forward[j] = (ell + r + 1 - j, (root_inf**j).coefficient(0) * Fraction(ell + 1, j))
    forward[ell + 1] = (r, _var(sigma_gen(r)))
    if r > 1:
        root0 = series_root(lam, ZERO, r, r)
        for i in range(1, r):
            j = r - i
            forward[ell + 1 + i] = (j, (root0**j).coefficient(0) * Fraction(r, j))
    coords = tuple(t_gen(a) for a in range(1, n_base + 1))
    lead = {}
    for a, (k, expr) in forward.items():
        lead[k] = expr.differentiate(sigma_gen(k))
    # solve infinity side top-down, then sigma_r, then the zero side bottom-up
    order = list(range(1, ell + 1)) + [ell + 1] + [ell + 1 + i for i in range(r - 1, 0, -1)]
    sol = _invert_triangular([forward[a] for a in order], lead, [coords[a - 1] for a in order], {})
    sigma_of_t = (E**r,) + tuple(sol[k] for k in range(1, ell + r + 1))
    s = Fraction(ell + 1 + r, r * (ell + 1))
    sdeg = {f"sigma_{k}": Fraction(ell + 1 + r - k, ell + 1) for k in range(1, ell + r + 1)}
    sdeg[E.used()[0].name] = s
    weights = tuple(_weights_of(forward[a][1], sdeg) for a in range(1, n_base)) + (Fraction(0),)
    shifts = (Fraction(0),) * (n_base - 1) + (s,)
    t_of_sigma = tuple(forward[a][1] for a in range(1, n_base)) + (ExpPoly.var(bullet),)
    chart = FlatChart(fam, "-dw/w", coords, sigma_of_t, t_of_sigma, weights, shifts, (), star=ell, bullet=n_base - 1)
    eta = _metric_from(chart.lambda_pf(), chart.partials_pf(), "-dw/w")
    return _replace_eta(chart, eta)


def extend_with_tail(base: FlatChart, n_poles: int, *, verify: bool = True) -> FlatChart:
    """Full (t, alpha, beta) chart; the metric block form is checked when ``verify``."""
    chart = base.with_tail(n_poles)
    if verify and n_poles:
        from .tensors import metric

        got = metric(chart, point=_check_point(chart))
        if got != chart.eta():
            raise DegenerateChartError("tail extension is not flat with the expected block form")
    return chart


def _check_point(chart: FlatChart) -> dict:
    """A fixed generic rational point for internal consistency checks."""
    from .verify import sample_point

    import random

    return sample_point(chart, random.Random(20240601))


def base_chart(family: Family) -> FlatChart:
    if family.kind == "A":
        return saito_flat_A(family.ell)
    return dz_flat_EAW(family.ell, family.r)


def full_flat_chart(family: Family, verify: bool = True) -> FlatChart:
    return extend_with_tail(base_chart(family), family.n_poles, verify=verify)
