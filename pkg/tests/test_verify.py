"""Verification suite: WDVV, homogeneity, comparison and sampling."""

import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from ratfrob.charts import Family
from ratfrob.core import ExpPoly, gen
from ratfrob.errors import HomogeneityViolation, StructuralMismatch, WdvvViolation
from ratfrob.flat import full_flat_chart
from ratfrob.golden import reference_prepotential
from ratfrob.prepotential import LogAtom, Prepotential, assemble
from ratfrob.verify import (
    VerifyConfig,
    compare_mod_quadratics,
    homogeneity_check,
    invert,
    sample_values,
    verify_structure,
    wdvv_check,
)

F_A3_REFERENCE = "1/2*t_1*t_2^2 + 1/2*t_1^2*t_3 - 1/16*t_2^2*t_3^2 + 1/960*t_3^5"
A3_NAMES = ["t_1", "t_2", "t_3"]


def prep(text, names=()):
    return Prepotential.from_text(text, names)


@pytest.fixture(scope="module")
def a3_tail():
    fam = Family("A", 3, 0, 2)
    return assemble(fam), full_flat_chart(fam)


def test_a3_two_poles_wdvv(a3_tail):
    F, chart = a3_tail
    rep = wdvv_check(F, chart.eta(), VerifyConfig(points=20), chart.names, "A3+2")
    assert rep.passed
    assert rep.points == 20
    assert rep.details["dimension"] == 7


def test_two_variables_vacuous():
    # with t_1 the unity direction, any g(t_2) works
    F = prep("1/2*t_1^2*t_2 + 3*t_2^7 - 1/5*t_2^4 + exp(2*t_2)")
    assert wdvv_check(F, [[0, 1], [1, 0]], VerifyConfig(points=5), ["t_1", "t_2"]).passed


def test_two_variables_without_unity():
    F = prep("t_1^2*t_2 + 3*t_2^7 - 1/5*t_2^4*t_1")
    assert not wdvv_check(F, [[0, 1], [1, 0]], VerifyConfig(points=5), ["t_1", "t_2"]).passed


class TestMutation:
    def test_reference_base_is_wdvv(self):
        assert wdvv_check(prep(F_A3_REFERENCE), None, VerifyConfig(points=10), A3_NAMES).passed

    def test_perturbed_coefficient_fails(self):
        F = prep(F_A3_REFERENCE.replace("1/960", "1/959"))
        with pytest.raises(WdvvViolation) as info:
            wdvv_check(F, None, VerifyConfig(points=10), A3_NAMES, raise_on_fail=True)
        assert set(info.value.witness["tuple"]) <= set(A3_NAMES)

    def test_perturbed_built_structure_fails(self, a3_tail):
        F, chart = a3_tail
        bumped = Prepotential(F.smooth + Fraction(1, 7) * gen("t_3") ** 5, F.logs, F.variables)
        rep = wdvv_check(bumped, chart.eta(), VerifyConfig(points=5), chart.names)
        assert not rep.passed and rep.witness["point"]


@pytest.mark.parametrize("name, fam", [("a3-np2", Family("A", 3, 0, 2)), ("a4-np2", Family("A", 4, 0, 2))])
def test_reference_full_prepotential_is_not_wdvv(name, fam):
    """Base and tail of these references use different metric normalizations."""
    names = full_flat_chart(fam).names
    assert not wdvv_check(reference_prepotential(name), None, VerifyConfig(points=3), names).passed


class TestHomogeneity:
    def test_cubic(self):
        assert homogeneity_check(prep("t^3"), [(1, 0)], 0, ["t"]).passed

    def test_quartic_fails(self):
        with pytest.raises(HomogeneityViolation, match="t"):
            homogeneity_check(prep("t^4"), [(1, 0)], 0, ["t"], raise_on_fail=True)

    def test_quantum_cohomology_one_pole(self):
        fam = Family("EAW", 0, 1, 1)
        chart = full_flat_chart(fam)
        assert 3 - chart.charge() == 2
        assert homogeneity_check(assemble(fam), chart.euler(), chart.charge(), chart.names).passed

    def test_a1_two_poles(self):
        fam = Family("A", 1, 0, 2)
        chart = full_flat_chart(fam)
        assert 3 - chart.charge() == 3
        assert homogeneity_check(assemble(fam), chart.euler(), chart.charge(), chart.names).passed

    def test_log_weight_mismatch(self):
        a = ExpPoly.var(gen("alpha_1").gens[0])
        F = Prepotential(ExpPoly.constant(0), [LogAtom(a * a / 2, a)], ["alpha_1"])
        # alpha of weight 1 gives E(F) - 2F = quadratic; with 3 - d = 3 the log survives
        assert homogeneity_check(F, [(1, 0)], 1, ["alpha_1"]).passed
        assert not homogeneity_check(F, [(1, 0)], 0, ["alpha_1"]).passed


class TestCompare:
    def test_quadratic_shift(self):
        F = assemble(Family("A", 1, 0, 2))
        G = Prepotential(F.smooth + 7 * gen("t_1") ** 2, F.logs)
        assert compare_mod_quadratics(F, G).passed

    def test_cubic_shift(self):
        F = assemble(Family("A", 1, 0, 2))
        G = Prepotential(F.smooth + gen("t_1") ** 3, F.logs)
        with pytest.raises(StructuralMismatch) as info:
            compare_mod_quadratics(F, G, raise_on_fail=True)
        assert info.value.witness["smooth_terms"]

    def test_missing_log(self):
        F = assemble(Family("A", 0, 0, 2))
        G = Prepotential(F.smooth, F.logs[:-1])
        rep = compare_mod_quadratics(F, G)
        assert not rep.passed and rep.witness["log_terms"]

    def test_log_argument_scale_ignored(self):
        a1, a2, b1, b2 = (gen(n) for n in ("alpha_1", "alpha_2", "beta_1", "beta_2"))
        F = Prepotential(ExpPoly.constant(0), [LogAtom(a1 * a2, b1 - b2)])
        G = Prepotential(ExpPoly.constant(0), [LogAtom(a1 * a2, b2 - b1)])
        assert compare_mod_quadratics(F, G).passed


def test_reports_are_deterministic():
    fam = Family("EAW", 0, 1, 2)
    F, chart = assemble(fam), full_flat_chart(fam)
    cfg = VerifyConfig(points=4, seed=11)
    first = [r.to_json() for r in verify_structure(F, chart, cfg, fam.label())]
    second = [r.to_json() for r in verify_structure(F, chart, cfg, fam.label())]
    assert first == second
    assert all('"passed": true' in x for x in first)


@given(st.integers(0, 10**6), st.integers(2, 6))
def test_sampled_groups_are_distinct_and_nonzero(seed, n):
    names = [f"beta_{i}" for i in range(n)]
    vals = sample_values(names, random.Random(seed), H=3, max_den=2, distinct=[names])
    assert len(set(vals.values())) == n
    assert all(v != 0 for v in vals.values())


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_invert(rows):
    M = [[Fraction(x) for x in row] for row in rows]
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    assume(det != 0)
    G = invert(M)
    for i in range(3):
        for j in range(3):
            assert sum(M[i][k] * G[k][j] for k in range(3)) == (1 if i == j else 0)
