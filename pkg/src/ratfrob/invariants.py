"""Polarised and exponential power sums and their certification in zero/pole charts."""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .core.expoly import ExpPoly, exponential, ordinary
from .core.ratfunc import RatFunc, as_ratfunc, divide_with_remainder
from .errors import CertificationFailure


@dataclass(frozen=True)
class InvariantSpec:
    """P_{m,n} = sum alpha^m beta^n, or (exponential) sum alpha^p e^{q beta}."""

    m: int
    n: int
    n_poles: int
    exponential: bool = False

    def __post_init__(self) -> None:
        if self.m < 0 or self.n_poles < 0:
            raise ValueError("power of alpha and arity must be non-negative")
        if self.n < 0 and not self.exponential:
            raise ValueError("ordinary power sums need a non-negative beta power")

    def expand(self) -> ExpPoly:
        return power_sum(self.m, self.n, self.n_poles, exponential_kind=self.exponential)


def power_sum(m: int, n: int, n_poles: int, *, exponential_kind: bool = False) -> ExpPoly:
    total = ExpPoly.constant(0)
    for mu in range(1, n_poles + 1):
        a = ExpPoly.var(ordinary(f"alpha_{mu}"), m) if m else ExpPoly.constant(1)
        if exponential_kind:
            b = ExpPoly.var(exponential(f"beta_{mu}"), n)
        else:
            b = ExpPoly.var(ordinary(f"beta_{mu}"), n) if n else ExpPoly.constant(1)
        total = total + a * b
    return total


def theta(k: int, n_poles: int) -> ExpPoly:
    return power_sum(1, k, n_poles)


def theta_tilde(k: int, n_poles: int) -> ExpPoly:
    return power_sum(1, k, n_poles, exponential_kind=True)


# zero/pole charts ------------------------------------------------------------


def _zero(i: int) -> ExpPoly:
    return ExpPoly.var(ordinary(f"a_{i}"))


def _pole(mu: int) -> ExpPoly:
    return ExpPoly.var(ordinary(f"p_{mu}"))


def _prod(xs) -> ExpPoly:
    out = ExpPoly.constant(1)
    for x in xs:
        out = out * x
    return out


def vandermonde(n: int) -> ExpPoly:
    return _prod(_pole(m) - _pole(v) for m, v in itertools.combinations(range(1, n + 1), 2))


def _residue_numerators(n_z: int, n_p: int, r: int, k: int, exponential_kind: bool):
    """Pairs (N_mu, D_mu) with sum N_mu/D_mu the invariant, scaled to stay polynomial.

    Ordinary case: N_mu/D_mu = alpha_mu p_mu^k.  Exponential case: the sum is
    (prod p)^(r+1) Theta~_k, further multiplied by (prod p)^(-k) when k < 0.
    """
    terms = []
    zeros = [_zero(i) for i in range(1, n_z + 1)]
    for mu in range(1, n_p + 1):
        p = _pole(mu)
        others = [_pole(v) for v in range(1, n_p + 1) if v != mu]
        num = _prod(p - a for a in zeros)
        den = _prod(p - q for q in others)
        if exponential_kind:
            num = num * _prod(q ** (r + 1) for q in others)
            num = num * (p**k if k >= 0 else _prod(q ** (-k) for q in others))
        else:
            num = num * p**k
        terms.append((num, den))
    return terms


@dataclass
class Certificate:
    passed: bool
    degree: int | None
    polynomial: bool
    symmetric: bool
    expected_degree: int | None = None
    witness: str | None = None
    expression: ExpPoly | None = None

    def to_dict(self) -> dict:
        d = {"passed": self.passed, "degree": self.degree, "polynomial": self.polynomial,
             "symmetric": self.symmetric}
        if self.expected_degree is not None:
            d["expected_degree"] = self.expected_degree
        if self.witness:
            d["witness"] = self.witness
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def expected_theta_tilde_degree(n_z: int, n_p: int, r: int, k: int) -> int:
    """Degree stated for the exponential certificate; the computed degree is n_z + k + r(n_p - 1)."""
    return n_z - n_p + r + k + 2


def _symmetric(expr: ExpPoly, n_z: int, n_p: int) -> tuple[bool, str | None]:
    for prefix, n in (("a", n_z), ("p", n_p)):
        for i, j in itertools.combinations(range(1, n + 1), 2):
            swapped = expr.rename({f"{prefix}_{i}": f"{prefix}_{j}", f"{prefix}_{j}": f"{prefix}_{i}"})
            if swapped != expr:
                return False, f"not invariant under {prefix}_{i} <-> {prefix}_{j}"
    return True, None


def certify_polynomiality(kind: str, k: int, family: str, ell: int, r: int, n_poles: int) -> Certificate:
    """Express Theta_k (family A) or Theta~_k (EAW) in zeros/poles and certify its shape.

    The numerator over the Vandermonde determinant is divided exactly; a
    nonzero remainder is a bug and raises CertificationFailure.
    """
    if kind not in ("theta", "theta_tilde"):
        raise ValueError("kind must be 'theta' or 'theta_tilde'")
    if n_poles < 1:
        raise ValueError("certification needs at least one pole")
    exponential_kind = kind == "theta_tilde"
    if exponential_kind != (family == "eaw"):
        raise ValueError("theta goes with family a, theta_tilde with family eaw")
    rr = r if exponential_kind else 0
    n_z = ell + 1 + rr + n_poles
    V = vandermonde(n_poles)
    total = ExpPoly.constant(0)
    for mu, (num, den) in enumerate(_residue_numerators(n_z, n_poles, rr, k, exponential_kind), start=1):
        cof, rem = divide_with_remainder(V, den)
        if rem != 0:
            raise CertificationFailure(f"Vandermonde factor for pole {mu} does not divide exactly")
        total = total + num * cof
    q, rem = divide_with_remainder(total, V)
    if rem != 0:
        raise CertificationFailure("numerator is not divisible by the Vandermonde determinant")
    expr, polynomial = q, True
    if exponential_kind and k < 0:
        back = as_ratfunc(q) / _prod(_pole(v) ** (-k) for v in range(1, n_poles + 1))
        polynomial = isinstance(back, ExpPoly) or back.is_polynomial()
        expr = back if isinstance(back, ExpPoly) else (back.as_expoly() if polynomial else q)
    sym, why = _symmetric(expr, n_z, n_poles)
    degs = expr.weighted_degrees({g.name: Fraction(1) for g in expr.used()}) if polynomial else set()
    degree = int(degs.pop()) if len(degs) == 1 else None
    expected = expected_theta_tilde_degree(n_z, n_poles, r, k) if exponential_kind else None
    passed = polynomial and sym
    witness = why
    if exponential_kind:
        if degree != expected:
            passed = False
            witness = f"homogeneous degree {degree}, stated {expected}"
    return Certificate(passed, degree, polynomial, sym, expected, witness, expr)


def nonpolynomial_witness(m: int, n: int, n_poles: int, ell: int = 1, seed: int = 0) -> int:
    """Denominator degree of P_{m,n} in zeros/poles, zeros fixed at a random rational point."""
    rng = random.Random(seed)
    n_z = ell + 1 + n_poles
    assign = {f"a_{i}": Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for i in range(1, n_z + 1)}
    total = as_ratfunc(0)
    for mu, (num, den) in enumerate(_residue_numerators(n_z, n_poles, 0, 0, False), start=1):
        alpha = as_ratfunc(num.subs(assign)) / den
        total = total + alpha**m * _pole(mu) ** n
    return total.den.total_degree() if isinstance(total, RatFunc) else 0
