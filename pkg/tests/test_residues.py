import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import nonzero_fractions, small_fractions
from ratfrob.charts import DivisionData, Family, lambda_pf
from ratfrob.core import INFINITY, ZERO, ExpPoly, W, as_ratfunc, finite, gen
from ratfrob.errors import DiscriminantError
from ratfrob.flat import full_flat_chart
from ratfrob.prepotential import f_hessian_rhs
from ratfrob.residues import (
    OneForm,
    PartialFractions,
    Pole,
    residue,
    residue_sum_over_critical,
)
from ratfrob.tensors import metric, three_point

w = ExpPoly.var(W)


def test_residue_of_dw_over_w():
    assert residue(OneForm(1 / w), ZERO) == 1


def test_simple_pole():
    assert residue(OneForm(1 / ((w - 2) * (w - 3))), finite(2)) == -1


def test_residue_at_infinity_sign():
    # Res_inf dw/w = -1
    assert residue(OneForm(1 / w), INFINITY) == -1


def test_q_residue_gives_f_hessian_entry():
    """The (t_3, t_3) entry of the f-system for l = 4 is a single residue: 1/5."""
    H = f_hessian_rhs(Family("A", 4))
    assert H[2][2] == Fraction(1, 5)


class TestCriticalSums:
    @pytest.fixture(scope="class")
    @staticmethod
    def a1_two_poles():
        return full_flat_chart(Family("A", 1, 0, 2))

    def test_tail_block_is_antidiagonal(self, a1_two_poles):
        eta = metric(a1_two_poles)
        # order: t, alpha_1, alpha_2, beta_1, beta_2
        for mu in range(2):
            for nu in range(2):
                assert eta[1 + mu][3 + nu] == (1 if mu == nu else 0)

    def test_alpha_cubed(self, a1_two_poles):
        c = three_point(a1_two_poles)
        assert c[(1, 1, 1)] == 1 / gen("alpha_1")
        assert c[(1, 1, 2)] == 0
        assert c[(1, 2, 2)] == 0

    def test_coinciding_poles(self):
        data = DivisionData((Fraction(0),), (Fraction(1), Fraction(1)), (Fraction(2), Fraction(2)))
        with pytest.raises(DiscriminantError):
            lambda_pf(data, Family("A", 0, 0, 2))


def test_brute_force_critical_points():
    """lambda = w^2 + t + 72/(w - 7) has lambda' = 2(w-1)(w-4)(w-9)/(w-7)^2."""
    t = Fraction(3, 2)
    lam = PartialFractions({2: Fraction(1), 0: t}, [Pole(Fraction(7), 1, Fraction(72))])
    num = PartialFractions({3: Fraction(1), 1: Fraction(-2), 0: Fraction(5)})

    def lam2(x):
        return 2 + 2 * 72 / Fraction(x - 7) ** 3

    expected = sum(Fraction(x**3 - 2 * x + 5) / lam2(x) for x in (1, 4, 9))
    assert residue_sum_over_critical(num, lam, "dw") == expected


def _random_form(rng):
    n = rng.randint(1, 4)
    pts = rng.sample(range(-20, 21), n)
    den = ExpPoly.constant(1)
    for p in pts:
        den = den * (w - p) ** rng.randint(1, 3)
    num = ExpPoly.constant(0)
    for k in range(rng.randint(0, 6)):
        num = num + Fraction(rng.randint(-9, 9), rng.randint(1, 5)) * w**k
    lau = rng.randint(0, 2)
    return as_ratfunc(num) / (den * w**lau), [finite(p) for p in pts] + [ZERO, INFINITY]


def test_residue_theorem_on_random_forms():
    rng = random.Random(314)
    for _ in range(100):
        f, centers = _random_form(rng)
        seen, total = set(), Fraction(0)
        for c in centers:
            key = (c.kind, c.point)
            if key in seen:
                continue
            seen.add(key)
            total += residue(OneForm(f), c)
        assert total == 0


@given(st.integers(-5, 5), small_fractions, nonzero_fractions)
def test_translation_invariance(p, shift, c):
    f = as_ratfunc(c * w**2 + 1) / ((w - p) ** 2 * (w - p - 1))
    moved = as_ratfunc(c * (w - shift) ** 2 + 1) / ((w - shift - p) ** 2 * (w - shift - p - 1))
    assert residue(OneForm(f), finite(p)) == residue(OneForm(moved), finite(p + shift))
