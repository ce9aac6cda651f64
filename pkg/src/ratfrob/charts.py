"""Charts on spaces of rational superpotentials and the exact maps between them.

Family ``A``:   lambda = w^(l+1) + sum_k sigma_k w^k + sum_mu alpha_mu / (w - beta_mu)
Family ``EAW``: lambda = w^(l+1) + sum_{k=0}^{l+r} sigma_k w^(k-r) + sum_mu w alpha_mu / (w - P_mu)

with ``P_mu = e^{beta_mu}`` in the EAW case.  The product chart writes lambda
as ``N(w) / D(w)`` (family A) or ``N(w) / (w^r D(w))`` (EAW) with monic N, D.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import W
from .core.expoly import ExpPoly, _SCALARS
from .core.ratfunc import RatFunc, as_ratfunc, simplify
from .core.text import format_value, parse_expr
from .errors import DiscriminantError
from .residues import PartialFractions, Pole, check_distinct

FAMILIES = ("A", "EAW")
CHARTS = ("product", "division", "flat")


@dataclass(frozen=True)
class Family:
    kind: str
    ell: int
    r: int = 0
    n_poles: int = 0

    def __post_init__(self) -> None:
        if self.kind not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.ell < 0 or self.n_poles < 0:
            raise ValueError("ell and n_poles must be non-negative")
        if self.kind == "EAW" and self.r < 1:
            raise ValueError("EAW family needs r >= 1")
        if self.kind == "A" and self.r:
            raise ValueError("family A has no r")

    @property
    def n_zeros(self) -> int:
        return self.ell + 1 + self.r + self.n_poles

    @property
    def n_sigma(self) -> int:
        """Number of division-chart coefficients sigma_0..sigma_top."""
        return self.ell + 1 if self.kind == "A" else self.ell + self.r + 1

    def sigma_power(self, k: int) -> int:
        return k if self.kind == "A" else k - self.r

    def label(self) -> str:
        if self.kind == "A":
            return f"A{self.ell}+{self.n_poles}"
        return f"A{self.ell + self.r}^({self.r})+{self.n_poles}"


def _cl(x):
    return simplify(x) if isinstance(x, (ExpPoly, RatFunc)) else Fraction(x)


@dataclass(frozen=True)
class ProductData:
    """Zeros and poles of lambda (their exponentials in the EAW case)."""

    zeros: tuple
    poles: tuple


@dataclass(frozen=True)
class DivisionData:
    """Coefficients sigma_0..sigma_top, residue weights alpha and pole positions.

    For EAW the pole positions are the values of e^{beta_mu}.
    """

    sigma: tuple
    alpha: tuple
    poles: tuple


def _poly_mul(p: list, q: list) -> list:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if b != 0:
                out[i + j] = out[i + j] + a * b
    return [_cl(c) for c in out]


def monic_from_roots(roots: Sequence) -> list:
    """Coefficients (low to high) of prod (w - root); the last entry is 1."""
    poly: list = [Fraction(1)]
    for z in roots:
        poly = _poly_mul(poly, [_cl(-z), Fraction(1)])
    return poly


def product_to_coeffs(data: ProductData) -> tuple[list, list]:
    """Signed elementary symmetric functions: a_0..a_{n_z-1}, b_0..b_{n_p-1}."""
    return monic_from_roots(data.zeros)[:-1], monic_from_roots(data.poles)[:-1]


def _eval_poly(p: list, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return _cl(acc)


def _divmod(num: list, den: list) -> tuple[list, list]:
    """Polynomial long division by a monic polynomial (low-to-high lists)."""
    num = list(num)
    dq = len(den) - 1
    if len(num) - 1 < dq:
        return [], num
    quo = [0] * (len(num) - dq)
    for i in range(len(num) - 1, dq - 1, -1):
        c = _cl(num[i])
        quo[i - dq] = c
        if c != 0:
            for j, d in enumerate(den):
                num[i - dq + j] = num[i - dq + j] - c * d
    return [_cl(c) for c in quo], [_cl(c) for c in num[:dq]]


def _series_inverse(p: list, n: int) -> list:
    """First n coefficients of 1/p(w) at w = 0."""
    p0 = p[0]
    if p0 == 0:
        raise DiscriminantError("pole at w = 0")
    inv0 = _cl(1 / p0) if not isinstance(p0, _SCALARS) else Fraction(1) / Fraction(p0)
    out = [inv0]
    for m in range(1, n):
        acc = 0
        for k in range(1, min(m, len(p) - 1) + 1):
            acc = acc + p[k] * out[m - k]
        out.append(_cl(-acc * inv0))
    return out


def coeffs_to_division(a: Sequence, b: Sequence, family: Family, poles: Sequence | None = None) -> DivisionData:
    """Division chart from monic numerator/denominator coefficients.

    ``poles`` are the denominator roots (needed for the residues); when absent
    and ``b`` is empty the tail is empty.
    """
    N = list(a) + [Fraction(1)]
    D = list(b) + [Fraction(1)]
    n_p = len(b)
    if poles is None:
        if n_p:
            raise ValueError("pole positions are required to compute residues")
        poles = ()
    poles = tuple(_cl(p) for p in poles)
    if len(poles) != n_p:
        raise ValueError("number of poles does not match denominator degree")
    check_distinct(poles)
    if family.kind == "A":
        T, _ = _divmod(N, D)
        sigma = tuple(T[: family.ell + 1])
        alpha = []
        for mu, p in enumerate(poles):
            others = [q for nu, q in enumerate(poles) if nu != mu]
            denom = _eval_poly(monic_from_roots(others), p)
            alpha.append(_cl(_eval_poly(N, p) / denom))
        return DivisionData(sigma, tuple(alpha), poles)
    r = family.r
    wrD = [Fraction(0)] * r + D
    T, R = _divmod(N, wrD)
    # principal part at 0 of R / (w^r D): the first r coefficients of R / D
    Dinv = _series_inverse(D, r)
    low = [_cl(sum((R[i] * Dinv[k - i] for i in range(k + 1) if i < len(R)), Fraction(0))) for k in range(r)]
    rho = []
    for mu, p in enumerate(poles):
        if p == 0:
            raise DiscriminantError("pole at w = 0")
        others = [q for nu, q in enumerate(poles) if nu != mu]
        denom = _eval_poly(monic_from_roots(others), p) * (p**r)
        rho.append(_cl(_eval_poly(N, p) / denom))
    alpha = tuple(_cl(rh / p) for rh, p in zip(rho, poles))
    sigma = list(low) + [_cl(T[0] - sum(alpha, Fraction(0)))] + list(T[1 : family.ell + 1])
    return DivisionData(tuple(sigma), alpha, poles)


def division_to_coeffs(data: DivisionData, family: Family) -> tuple[list, list]:
    """Common-denominator recomposition; inverse of :func:`coeffs_to_division`."""
    D = monic_from_roots(data.poles)
    n_p = len(data.poles)
    if family.kind == "A":
        T = list(data.sigma) + [Fraction(0)] * (family.ell + 1 - len(data.sigma)) + [Fraction(1)]
        N = _poly_mul(T, D) if n_p else T
        for mu, (al, p) in enumerate(zip(data.alpha, data.poles)):
            others = monic_from_roots([q for nu, q in enumerate(data.poles) if nu != mu])
            for k, c in enumerate(others):
                N[k] = _cl(N[k] + al * c)
        return N[:-1], D[:-1]
    r = family.r
    # lambda * w^r * D
    s = data.sigma
    Tw = list(s) + [Fraction(1)]  # coefficients of w^k for k = 0..l+1+r after multiplying by w^r
    Tw[r] = _cl(Tw[r] + sum(data.alpha, Fraction(0)))
    N = _poly_mul(Tw, D) if n_p else Tw
    for mu, (al, p) in enumerate(zip(data.alpha, data.poles)):
        others = monic_from_roots([q for nu, q in enumerate(data.poles) if nu != mu])
        rho = _cl(al * p)
        # rho / (w - p) * w^r * D = rho * w^r * prod_{nu != mu}(w - p_nu)
        for k, c in enumerate(others):
            N[k + r] = _cl(N[k + r] + rho * c)
    return N[:-1], D[:-1]


def lambda_pf(data: DivisionData, family: Family) -> PartialFractions:
    """lambda in partial-fraction form (the EAW tail w a/(w-P) = a + a P/(w-P))."""
    lau: dict[int, object] = {family.ell + 1: Fraction(1)}
    for k, s in enumerate(data.sigma):
        kk = family.sigma_power(k)
        lau[kk] = _cl(lau.get(kk, 0) + s)
    poles = []
    if family.kind == "A":
        poles = [Pole(p, 1, al) for al, p in zip(data.alpha, data.poles)]
    else:
        lau[0] = _cl(lau.get(0, 0) + sum(data.alpha, Fraction(0)))
        poles = [Pole(p, 1, _cl(al * p)) for al, p in zip(data.alpha, data.poles)]
    check_distinct(list(data.poles))
    return PartialFractions(lau, poles)


def lambda_of(data: DivisionData | ProductData, family: Family):
    """lambda(w) as a reduced rational function."""
    w = ExpPoly.var(W)
    if isinstance(data, ProductData):
        num = as_ratfunc(1)
        for z in data.zeros:
            num = num * (w - z)
        den = as_ratfunc(1)
        for p in data.poles:
            den = den * (w - p)
        if family.kind == "EAW":
            den = den * w**family.r
        return simplify(num / den)
    total = as_ratfunc(w ** (family.ell + 1))
    for k, s in enumerate(data.sigma):
        total = total + as_ratfunc(w ** family.sigma_power(k)) * s
    for al, p in zip(data.alpha, data.poles):
        if family.kind == "A":
            total = total + as_ratfunc(al) / (w - p)
        else:
            total = total + as_ratfunc(w * al) / (w - p)
    return simplify(total)


# symbolic charts ----------------------------------------------------------


def symbolic_division(family: Family) -> DivisionData:
    """Division chart with generators sigma_k, alpha_mu, beta_mu (E[beta_mu] for EAW)."""
    from .core import exp_of, gen

    sigma = tuple(gen(f"sigma_{k}") for k in range(family.n_sigma))
    if family.kind == "A":
        sigma = sigma[: family.ell]
    alpha = tuple(gen(f"alpha_{m}") for m in range(1, family.n_poles + 1))
    if family.kind == "A":
        poles = tuple(gen(f"beta_{m}") for m in range(1, family.n_poles + 1))
    else:
        poles = tuple(exp_of(f"beta_{m}") for m in range(1, family.n_poles + 1))
    return DivisionData(sigma, alpha, poles)


@dataclass
class Superpotential:
    """A superpotential in a named chart, with JSON round-tripping."""

    family: Family
    chart: str
    data: object = None
    symbolic: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.chart not in CHARTS:
            raise ValueError(f"chart must be one of {CHARTS}")

    def lam(self):
        if self.chart == "flat":
            return self.data.lambda_flat()
        return lambda_of(self.data, self.family)

    def to_json(self) -> str:
        f = self.family
        payload = {"family": f.kind, "ell": f.ell, "r": f.r, "n_poles": f.n_poles, "chart": self.chart}
        if self.symbolic or self.chart == "flat":
            payload["values"] = "symbolic"
        elif isinstance(self.data, ProductData):
            payload["values"] = {
                "zeros": [format_value(z) for z in self.data.zeros],
                "poles": [format_value(p) for p in self.data.poles],
            }
        else:
            payload["values"] = {
                "sigma": [format_value(s) for s in self.data.sigma],
                "alpha": [format_value(a) for a in self.data.alpha],
                "poles": [format_value(p) for p in self.data.poles],
            }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Superpotential":
        d = json.loads(text)
        fam = Family(d["family"], d["ell"], d.get("r", 0), d["n_poles"])
        chart = d["chart"]
        vals = d["values"]
        if vals == "symbolic":
            if chart == "flat":
                from .flat import full_flat_chart

                return cls(fam, "flat", full_flat_chart(fam), symbolic=True)
            return cls(fam, chart, symbolic_division(fam), symbolic=True) if chart == "division" else cls(fam, chart, None, True)

        def conv(x):
            v = parse_expr(x)
            return v.constant_value() if isinstance(v, ExpPoly) and v.is_constant() else v

        if chart == "product":
            data = ProductData(tuple(map(conv, vals["zeros"])), tuple(map(conv, vals["poles"])))
        else:
            data = DivisionData(
                tuple(map(conv, vals["sigma"])), tuple(map(conv, vals["alpha"])), tuple(map(conv, vals["poles"]))
            )
        return cls(fam, chart, data)


def mobius_standard_form(a: Sequence, b: Sequence) -> tuple[list, list]:
    """(alpha, beta) of z + sum a_mu/(z - b_mu) after the change of representative
    z - b_1 = a_1/(x - b_1), w = x + sum_{nu>1} a_nu/(b_1 - b_nu), which makes the
    second-type differential -a_1 dz/(z - b_1)^2 equal to dw."""
    m = len(a)
    if m == 0:
        return [], []
    check_distinct(list(b))
    a1, b1 = a[0], b[0]
    shift = sum((_cl(a[n] / (b1 - b[n])) for n in range(1, m)), Fraction(0))
    alpha = [_cl(a1)]
    beta = [_cl(b1 + shift)]
    for mu in range(1, m):
        d = b1 - b[mu]
        alpha.append(_cl(-a[mu] * a1 / (d * d)))
        beta.append(_cl(b1 - a1 / d + shift))
    return alpha, beta
