from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import X, Y, expolys, nonzero_fractions, small_fractions
from ratfrob.core import (
    INFINITY,
    ZERO,
    ExpPoly,
    RatFunc,
    W,
    as_ratfunc,
    eval_exact,
    exp_of,
    finite,
    gen,
    laurent_expand,
    parse_expr,
    puiseux_root,
    series_root,
    simplify,
)
from ratfrob.core.text import format_value, parse_with_logs
from ratfrob.errors import DegenerateChartError, NotMonic, PoleHit, UnknownGenerator

x, y = ExpPoly.var(X), ExpPoly.var(Y)
w = ExpPoly.var(W)


class TestDifferentiate:
    def test_power_rule(self):
        t = gen("t")
        assert (t**2).differentiate("t") == 2 * t

    def test_exponential_rule(self):
        alpha, E = gen("alpha"), exp_of("beta")
        assert (alpha * E**2).differentiate("beta") == 2 * alpha * E**2

    def test_quantum_cohomology_base(self):
        F = parse_expr("1/2*t_1^2*t_2 + E[t_2]")
        assert F.differentiate("t_2") == parse_expr("1/2*t_1^2 + E[t_2]")

    def test_unknown_variable(self):
        with pytest.raises(UnknownGenerator):
            (x + y).differentiate("z")

    def test_quotient_rule(self):
        f = as_ratfunc(x) / (x - y)
        got = f.differentiate("x")
        assert got == as_ratfunc(-y) / ((x - y) ** 2)


class TestEvalExact:
    def test_direct(self):
        a, b, c, d = (gen(n) for n in "abcd")
        f = as_ratfunc((c - a) * (c - b)) / (c - d)
        assert f.eval_exact({"a": 0, "b": 1, "c": 2, "d": 3}) == -2

    def test_cancellation(self):
        alpha = gen("alpha")
        assert eval_exact(simplify(as_ratfunc(alpha**2) / alpha), {"alpha": 5}) == 5

    def test_pole_hit(self):
        f = 1 / (gen("beta_1") - gen("beta_2"))
        with pytest.raises(PoleHit):
            f.eval_exact({"beta_1": 1, "beta_2": 1})

    def test_missing_assignment(self):
        with pytest.raises(UnknownGenerator):
            (x * y).eval_exact({"x": 1})

    def test_exponential_sampled_independently(self):
        f = gen("beta") * exp_of("beta")
        assert f.eval_exact({"beta": 3, "E[beta]": Fraction(1, 2)}) == Fraction(3, 2)


class TestSeries:
    def test_geometric(self):
        s = laurent_expand(1 / (1 - w), ZERO, 3)
        assert [s.coefficient(k) for k in range(4)] == [1, 1, 1, 1]

    def test_principal_part_at_finite_point(self):
        s = laurent_expand(as_ratfunc(w) / (w - 2), finite(2), 1)
        assert s.coefficient(-1) == 2
        assert s.coefficient(0) == 1

    def test_q_leading_coefficient(self):
        # Q(w) = 5 + 3 s2 w^2 + ... for the quartic base with l = 4
        s2 = gen("s")
        s = laurent_expand(1 / (5 + 3 * s2 * w**2), ZERO, 2)
        assert s.coefficient(0) == Fraction(1, 5)
        assert s.coefficient(2) == parse_expr("-3/25*s")

    def test_degenerate_center(self):
        # an unreduced quotient with a common zero at the center
        f = RatFunc((w - 1) * (w + 1), w - 1, _reduced=True)
        with pytest.raises(DegenerateChartError):
            laurent_expand(f, finite(1), 2)

    def test_sqrt_binomial(self):
        t = gen("t")
        s = puiseux_root(w**2 + t, 2, 2)
        assert s.coefficient(-1) == 1
        assert s.coefficient(1) == t / 2

    def test_fourth_root_against_power(self):
        s2 = gen("sigma_2")
        lam = w**4 + s2 * w**2
        root = puiseux_root(lam, 4, 4)
        assert root.coefficient(1) == s2 / 4
        back = root**4
        ref = laurent_expand(lam, INFINITY, back.N)
        assert all(back.coefficient(k) == ref.coefficient(k) for k in range(back.val, back.N + 1))

    def test_identity_root(self):
        f = w**3 + 2 * w
        a = puiseux_root(f, 1, 4)
        b = laurent_expand(f, INFINITY, 1)
        assert [a.coefficient(k) for k in range(-3, 2)] == [b.coefficient(k) for k in range(-3, 2)]

    def test_not_monic(self):
        with pytest.raises(NotMonic):
            puiseux_root(2 * w**2 + 1, 2, 2)

    def test_root_at_zero(self):
        E = exp_of("t_3")
        root = series_root(E**2 * w**-2 + w, ZERO, 2, 2)
        assert (root**2).coefficient(-2) == E**2


class TestText:
    def test_roundtrip(self):
        p = parse_expr("1/2*alpha_1^2*E[beta_1]^-1 - 3*t_1*t_2 + 7")
        assert parse_expr(format_value(p)) == p

    def test_exp_sugar(self):
        assert parse_expr("exp(t_3 - beta_1)") == exp_of("t_3") * exp_of("beta_1") ** -1

    def test_logs_kept_apart(self):
        smooth, logs = parse_with_logs("t^3 + 1/2*a^2*log(a)")
        assert smooth == gen("t") ** 3
        assert logs == [(gen("a") ** 2 / 2, gen("a"))]

    @pytest.mark.parametrize("bad", ["log(x)", "x**y", "f(x)", "1.5*x"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_expr(bad)


@given(expolys(), expolys(), expolys())
def test_distributive(f, g, h):
    assert (f + g) * h == f * h + g * h


@given(expolys(), expolys())
def test_commutative_and_hash(f, g):
    assert f * g == g * f
    assert hash(f + g) == hash(g + f)


@given(expolys(), small_fractions, small_fractions, nonzero_fractions)
def test_derivative_matches_coefficients(f, xv, yv, ev):
    """d/dx then evaluate equals evaluating the exponent-wise derivative."""
    point = {"x": xv, "y": yv, "E[b]": ev, "b": Fraction(1)}
    d = f.differentiate(X)
    manual = Fraction(0)
    for e, c in f.terms.items():
        k = dict(zip((g.name for g in f.gens), e)).get("x", 0)
        if k:
            rest = {g.name: p for g, p in zip(f.gens, e)}
            rest["x"] = k - 1
            manual += c * k * ExpPoly.monomial({g: rest[g.name] for g in f.gens}).eval_exact(point)
    assert eval_exact(d, point) == manual


@given(expolys(gens=(X, Y)), expolys(gens=(X, Y)).filter(lambda p: not p.is_zero()))
def test_ratfunc_canonical(f, g):
    q = as_ratfunc(f * g) / g
    assert simplify(q) == f


@given(st.integers(0, 3), st.integers(4, 7), small_fractions)
def test_truncation_consistency(n1, extra, c):
    f = as_ratfunc(w + c) / (w**2 - 3 * w + 1)
    lo = laurent_expand(f, ZERO, n1)
    hi = laurent_expand(f, ZERO, n1 + extra)
    assert hi.truncate(n1).coefficient(n1) == lo.coefficient(n1)
    assert all(hi.coefficient(k) == lo.coefficient(k) for k in range(0, n1 + 1))


@given(st.lists(small_fractions, min_size=4, max_size=4), st.sampled_from([2, 3, 4]))
def test_puiseux_root_power(coeffs, m):
    lam = w**4
    for k, c in enumerate(coeffs):
        lam = lam + c * w**k
    root = puiseux_root(lam, m, 6)
    back = root**m
    ram = back.ram
    ref = laurent_expand(lam, INFINITY, back.N // ram)
    for k in range(back.val, back.N + 1):
        expected = ref.coefficient(k // ram) if k % ram == 0 else 0
        assert back.coefficient(k) == expected
