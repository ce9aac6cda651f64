import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ratfrob.charts import Family
from ratfrob.core import as_ratfunc, exp_of, gen
from ratfrob.errors import DegenerateChartError
from ratfrob.flat import base_chart, full_flat_chart
from ratfrob.tensors import (
    PullbackSpec,
    cartan,
    congruence,
    covering_jacobian,
    euler_unity,
    intersection_form_product_chart,
    jacobian_determinant,
    lie_euler_metric,
    lie_unity_lambda,
    metric,
    pullback_intersection,
    three_point,
)
from ratfrob.verify import VerifyConfig, associativity_check

F = Fraction
b1, b2 = gen("beta_1"), gen("beta_2")


def test_pure_a1_metric():
    assert metric(base_chart(Family("A", 1))) == [[F(1, 2)]]


class TestThreePoint:
    def test_a_tail_mixed_entries(self):
        c = three_point(full_flat_chart(Family("A", 1, 0, 2)))
        # coords: t, alpha_1, alpha_2, beta_1, beta_2
        assert c[(1, 2, 3)] == 1 / as_ratfunc(b1 - b2)
        assert c[(1, 2, 4)] == -1 / as_ratfunc(b1 - b2)
        assert c[(2, 2, 2)] == 1 / gen("alpha_2")

    def test_eaw_tail_mixed_entries(self):
        c = three_point(full_flat_chart(Family("EAW", 0, 1, 2)))
        # coords: t_1, t_2, alpha_1, alpha_2, beta_1, beta_2
        P1, P2 = exp_of("beta_1"), exp_of("beta_2")
        assert c[(2, 3, 4)] == as_ratfunc(P1) / (P1 - P2)
        assert c[(2, 3, 5)] == -as_ratfunc(P2) / (P1 - P2)


SAMPLES = [Family("A", 1, 0, 2), Family("A", 3, 0, 1), Family("EAW", 0, 1, 2), Family("EAW", 1, 1, 1),
           Family("EAW", 1, 2, 1)]


def test_euler_a1_two_poles():
    _, E, d = euler_unity(full_flat_chart(Family("A", 1, 0, 2)))
    assert E == [(1, 0), (F(3, 2), 0), (F(3, 2), 0), (F(1, 2), 0), (F(1, 2), 0)]
    assert 3 - d == F(2 * 3, 2)


def test_euler_quantum_cohomology_one_pole():
    e, E, d = euler_unity(full_flat_chart(Family("EAW", 0, 1, 1)))
    # t_1 d/dt_1 + 2 d/dt_2 + alpha d/dalpha + d/dbeta
    assert E == [(1, 0), (0, 2), (1, 0), (0, 1)]
    assert e == [1, 0, 0, 0]
    assert d == 1


@pytest.mark.parametrize("fam", SAMPLES + [Family("A", 0, 0, 2), Family("A", 4, 0, 2)], ids=Family.label)
def test_lie_euler_scales_metric(fam):
    chart = full_flat_chart(fam)
    two_minus_d = 2 - chart.charge()
    assert lie_euler_metric(chart) == [[two_minus_d * x for x in row] for row in chart.eta()]


@pytest.mark.parametrize("fam", SAMPLES, ids=Family.label)
def test_unity_derivative_of_lambda_is_one(fam):
    e_lam = lie_unity_lambda(full_flat_chart(fam))
    assert e_lam.laurent == {0: 1} and e_lam.poles == ()


@pytest.mark.parametrize("fam", SAMPLES, ids=Family.label)
def test_unity_contracts_to_metric(fam):
    chart = full_flat_chart(fam)
    c = three_point(chart)
    e = chart.unity()
    eta = chart.eta()
    n = chart.dim
    for a in range(n):
        for b in range(n):
            total = sum((ci * c[tuple(sorted((i, a, b)))] for i, ci in enumerate(e) if ci), F(0))
            assert total == eta[a][b]


@pytest.mark.parametrize("fam", SAMPLES, ids=Family.label)
def test_associativity_at_random_points(fam):
    rep = associativity_check(full_flat_chart(fam), VerifyConfig(points=20), fam.label())
    assert rep.passed, rep.witness


class TestIntersectionForm:
    def test_two_zeros_r1(self):
        assert intersection_form_product_chart(2, 0, 1) == [[0, -1], [-1, 0]]

    @pytest.mark.parametrize("r", [1, 2, 5])
    def test_read_off_entries(self, r):
        g = intersection_form_product_chart(3, 2, r)
        assert g[0][0] == 1 - F(1, r)
        assert g[0][3] == F(1, r)
        assert g[3][3] == -1 - F(1, r)
        assert g[0][1] == -F(1, r)

    def test_rejects_r0(self):
        with pytest.raises(ValueError):
            intersection_form_product_chart(2, 2, 0)


def K_block(spec):
    g = pullback_intersection(spec)
    return [row[-2:] for row in g[-2:]]


def test_k_closed_form():
    spec = PullbackSpec(5, 3, 2, 1, 3, 2, 1)
    K = K_block(spec)
    n1, n2, v1, v2 = 1, 3, 2, 1
    assert K[0][1] == F(n1 * n2, 5) - F(v1 * v2, 3) - F((n1 - v1) * (n2 - v2), 2)
    assert K[0][0] == F(n1**2, 5) - F(v1**2, 3) - F((n1 - v1) ** 2, 2)


def test_equal_marks_are_degenerate():
    # n = nu on both marks forces Delta = 0, so the agreeing-marks form is only seen entrywise
    spec = PullbackSpec(4, 3, 3, 1, 2, 1, 2)
    assert spec.delta == 0
    with pytest.raises(DegenerateChartError):
        pullback_intersection(spec)


def test_k_entry_with_agreeing_mark():
    spec = PullbackSpec(5, 3, 3, 2, 1, 2, 2)
    assert K_block(spec)[0][0] == (F(1, 5) - F(1, 3)) * 2**2


def test_cartan_tridiagonal():
    assert cartan(3) == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]


def test_pullback_block_structure():
    spec = PullbackSpec(4, 3, 2, 1, 2, 2, 1)
    g = pullback_intersection(spec)
    assert [row[:3] for row in g[:3]] == cartan(3)
    assert [row[3:5] for row in g[3:5]] == [[-2, 1], [1, -2]]


marks = st.tuples(st.integers(2, 6), st.integers(2, 6), st.integers(1, 4)).flatmap(
    lambda t: st.tuples(
        st.just(t),
        st.integers(1, t[0] - 1), st.integers(1, t[0] - 1),
        st.integers(1, t[1] - 1), st.integers(1, t[1] - 1),
    )
)


@given(marks)
def test_pullback_equals_congruence(m):
    (nz, np_, r), n1, n2, v1, v2 = m
    spec = PullbackSpec(nz, np_, r, n1, n2, v1, v2)
    assume(spec.delta != 0)
    J = covering_jacobian(spec)
    assert pullback_intersection(spec) == congruence(J, intersection_form_product_chart(nz, np_, r))


def test_jacobian_determinant_nonzero_iff_delta():
    rng = random.Random(3)
    for _ in range(20):
        nz, np_ = rng.randint(2, 5), rng.randint(2, 5)
        spec = PullbackSpec(nz, np_, 1, rng.randint(1, nz - 1), rng.randint(1, nz - 1),
                            rng.randint(1, np_ - 1), rng.randint(1, np_ - 1))
        assert (jacobian_determinant(covering_jacobian(spec)) != 0) == (spec.delta != 0)


def test_spec_validation():
    with pytest.raises(ValueError):
        PullbackSpec(3, 2, 1, 3, 1, 1, 1)
