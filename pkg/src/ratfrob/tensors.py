"""Metric, three-point tensor, unity and Euler data; intersection-form matrices."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .charts import DivisionData, Family, Superpotential
from .errors import DegenerateChartError
from .flat import FlatChart
from .residues import CriticalSum, PartialFractions, Pole


@dataclass(frozen=True)
class Pieces:
    """lambda and its coordinate partials in partial-fraction form."""

    names: tuple
    lam: PartialFractions
    partials: tuple
    omega: str

    def at(self, point: Mapping[str, object] | None) -> "Pieces":
        if point is None:
            return self
        return Pieces(self.names, self.lam.eval_at(point), tuple(p.eval_at(point) for p in self.partials), self.omega)


def division_pieces(family: Family, data: DivisionData, omega: str | None = None) -> Pieces:
    """Pieces in the division chart (sigma_k, alpha_mu, beta_mu)."""
    from .charts import lambda_pf

    omega = omega or ("dw" if family.kind == "A" else "-dw/w")
    names = [f"sigma_{k}" for k in range(len(data.sigma))]
    partials = [PartialFractions({family.sigma_power(k): Fraction(1)}) for k in range(len(data.sigma))]
    n_p = len(data.alpha)
    names += [f"alpha_{m}" for m in range(1, n_p + 1)] + [f"beta_{m}" for m in range(1, n_p + 1)]
    for p in data.poles:
        if family.kind == "A":
            partials.append(PartialFractions({}, [Pole(p, 1, Fraction(1))]))
        else:
            partials.append(PartialFractions({0: Fraction(1)}, [Pole(p, 1, p)]))
    for a, p in zip(data.alpha, data.poles):
        if family.kind == "A":
            partials.append(PartialFractions({}, [Pole(p, 2, a)]))
        else:
            partials.append(PartialFractions({}, [Pole(p, 1, a * p), Pole(p, 2, a * p * p)]))
    return Pieces(tuple(names), lambda_pf(data, family), tuple(partials), omega)


def flat_pieces(chart: FlatChart) -> Pieces:
    return Pieces(tuple(chart.names), chart.lambda_pf(), tuple(chart.partials_pf()), chart.omega)


def pieces_of(obj, omega: str | None = None) -> Pieces:
    if isinstance(obj, Pieces):
        return obj
    if isinstance(obj, FlatChart):
        p = flat_pieces(obj)
        return p if omega is None else Pieces(p.names, p.lam, p.partials, omega)
    if isinstance(obj, Superpotential):
        if obj.chart == "flat":
            return pieces_of(obj.data, omega)
        if obj.chart == "division":
            return division_pieces(obj.family, obj.data, omega)
        raise ValueError("tensors are computed in the division or flat chart")
    raise TypeError(f"cannot build residue pieces from {type(obj).__name__}")


def metric(obj, omega: str | None = None, point: Mapping[str, object] | None = None) -> list[list]:
    """eta_ab = sum over critical points of Res d_a lambda d_b lambda / lambda' phi^2 dw."""
    pc = pieces_of(obj, omega).at(point)
    n = len(pc.partials)
    cs = CriticalSum(pc.lam, pc.omega, pc.partials, 2)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            out[i][j] = out[j][i] = cs.value(i, j)
    return out


def three_point(obj, omega: str | None = None, point: Mapping[str, object] | None = None,
                indices: Sequence[tuple] | None = None) -> dict:
    """c_abc over sorted index triples (or the requested ones)."""
    pc = pieces_of(obj, omega).at(point)
    n = len(pc.partials)
    cs = CriticalSum(pc.lam, pc.omega, pc.partials, 3)
    idx = indices if indices is not None else itertools.combinations_with_replacement(range(n), 3)
    return {tuple(sorted(t)): cs.value(*t) for t in idx}


@dataclass(frozen=True)
class FrobeniusData:
    variables: tuple
    eta: tuple
    c: dict
    unity: tuple
    euler: tuple
    charge: Fraction

    def c_entry(self, i: int, j: int, k: int):
        return self.c[tuple(sorted((i, j, k)))]


def euler_unity(chart: FlatChart):
    """(unity coefficients, Euler (weight, shift) pairs, charge d) in the flat chart."""
    return chart.unity(), chart.euler(), chart.charge()


def frobenius_data(chart: FlatChart, point: Mapping[str, object] | None = None) -> FrobeniusData:
    e, E, d = euler_unity(chart)
    eta = metric(chart, point=point)
    c = three_point(chart, point=point)
    return FrobeniusData(tuple(chart.names), tuple(map(tuple, eta)), c, tuple(e), tuple(E), d)


def lie_euler_metric(chart: FlatChart) -> list[list[Fraction]]:
    """(Lie_E eta)_ab for constant eta and E = sum (w_i x_i + s_i) d_i: (w_a + w_b) eta_ab."""
    eta = chart.eta()
    ws = [w for w, _ in chart.euler()]
    return [[(ws[i] + ws[j]) * eta[i][j] for j in range(len(ws))] for i in range(len(ws))]


def lie_unity_lambda(chart: FlatChart) -> PartialFractions:
    """e(lambda) as partial fractions; equals the constant 1 for l >= 1 and EAW."""
    e = chart.unity()
    total = PartialFractions({})
    for ci, p in zip(e, chart.partials_pf()):
        if ci:
            total = total + p.scale(ci)
    return total


# intersection form and covering ------------------------------------------------


def intersection_form_product_chart(n_z: int, n_p: int, r: int) -> list[list[Fraction]]:
    """g = sum dphi^2 - sum dpsi^2 - (1/r)(sum dphi - sum dpsi)^2 in (phi, psi)."""
    if r < 1:
        raise ValueError("r must be positive")
    n = n_z + n_p
    sign = [1] * n_z + [-1] * n_p
    inv_r = Fraction(1, r)
    return [
        [(Fraction(sign[i]) if i == j else Fraction(0)) - inv_r * sign[i] * sign[j] for j in range(n)]
        for i in range(n)
    ]


@dataclass(frozen=True)
class PullbackSpec:
    n_z: int
    n_p: int
    r: int
    n1: int
    n2: int
    nu1: int
    nu2: int

    def __post_init__(self) -> None:
        if self.n_z < 2 or self.n_p < 2 or self.r < 1:
            raise ValueError("need n_z >= 2, n_p >= 2, r >= 1")
        if not (1 <= self.n1 <= self.n_z - 1 and 1 <= self.n2 <= self.n_z - 1):
            raise ValueError("zero marks must lie in [1, n_z - 1]")
        if not (1 <= self.nu1 <= self.n_p - 1 and 1 <= self.nu2 <= self.n_p - 1):
            raise ValueError("pole marks must lie in [1, n_p - 1]")

    @property
    def delta(self) -> int:
        return self.n1 * self.nu2 - self.n2 * self.nu1


def cartan(n: int) -> list[list[Fraction]]:
    return [[Fraction(2 if i == j else -1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def _block_diag(*blocks) -> list[list[Fraction]]:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def pullback_intersection(spec: PullbackSpec) -> list[list[Fraction]]:
    """Closed form: Cartan(A_{n_z-1}) + (-Cartan(A_{n_p-1})) + K, with the (2 pi i)^2 removed."""
    if spec.delta == 0:
        raise DegenerateChartError("marks give a degenerate covering chart (Delta = 0)")
    nz, np_, r = spec.n_z, spec.n_p, spec.r
    m = (spec.n1, spec.n2)
    nu = (spec.nu1, spec.nu2)
    K = [[Fraction(m[i] * m[j], nz) - Fraction(nu[i] * nu[j], np_) - Fraction((m[i] - nu[i]) * (m[j] - nu[j]), r)
          for j in range(2)] for i in range(2)]
    neg = [[-v for v in row] for row in cartan(np_ - 1)]
    return _block_diag(cartan(nz - 1), neg, K)


def covering_jacobian(spec: PullbackSpec) -> list[list[Fraction]]:
    """d(phi, psi)/d(x_1..x_{n_z-1}, z_1..z_{n_p-1}, x, y) for the linear covering map."""
    nz, np_ = spec.n_z, spec.n_p
    cols = nz - 1 + np_ - 1 + 2
    J = [[Fraction(0)] * cols for _ in range(nz + np_)]
    for a in range(nz - 1):
        J[a][a] += 1
        J[a + 1][a] -= 1
    for b in range(np_ - 1):
        J[nz + b][nz - 1 + b] += 1
        J[nz + b + 1][nz - 1 + b] -= 1
    cx, cy = cols - 2, cols - 1
    for a in range(nz):
        J[a][cx] = Fraction(-spec.n1, nz)
        J[a][cy] = Fraction(-spec.n2, nz)
    for b in range(np_):
        J[nz + b][cx] = Fraction(-spec.nu1, np_)
        J[nz + b][cy] = Fraction(-spec.nu2, np_)
    return J


def congruence(J: list[list[Fraction]], g: list[list[Fraction]]) -> list[list[Fraction]]:
    """J^T g J."""
    n, m = len(J), len(J[0])
    gJ = [[sum((g[i][k] * J[k][j] for k in range(n)), Fraction(0)) for j in range(m)] for i in range(n)]
    return [[sum((J[k][i] * gJ[k][j] for k in range(n)), Fraction(0)) for j in range(m)] for i in range(m)]


def jacobian_determinant(J: list[list[Fraction]]) -> Fraction:
    import sympy

    return Fraction(str(sympy.Matrix(J).det()))
