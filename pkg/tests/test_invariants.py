from fractions import Fraction

import pytest
import sympy

from ratfrob.core import exp_of, gen
from ratfrob.core.text import parse_expr
from ratfrob.invariants import (
    InvariantSpec,
    certify_polynomiality,
    expected_theta_tilde_degree,
    nonpolynomial_witness,
    power_sum,
    theta,
    theta_tilde,
)

a1, a2, a3 = (gen(f"alpha_{m}") for m in (1, 2, 3))
b1, b2 = gen("beta_1"), gen("beta_2")


def test_theta_zero_is_alpha_sum():
    assert theta(0, 3) == a1 + a2 + a3


def test_p21():
    assert power_sum(2, 1, 2) == a1**2 * b1 + a2**2 * b2


def test_theta_tilde_minus_one():
    expected = a1 * exp_of("beta_1") ** -1 + a2 * exp_of("beta_2") ** -1
    assert theta_tilde(-1, 2) == expected


def test_spec_expands_to_power_sum():
    assert InvariantSpec(1, 3, 2, False).expand() == theta(3, 2)
    assert InvariantSpec(1, 2, 2, True).expand() == theta_tilde(2, 2)


def test_residue_sum_for_two_zeros_two_poles():
    """alpha_1 + alpha_2 for (w-a_1)(w-a_2)/((w-p_1)(w-p_2)) is p_1 + p_2 - a_1 - a_2."""
    cert = certify_polynomiality("theta", 0, "a", -1, 0, 2)
    assert cert.passed
    assert cert.expression == parse_expr("p_1 + p_2 - a_1 - a_2")


def test_vandermonde_divides_theta1_numerator():
    a = sympy.symbols("a_1:5")
    p1, p2 = sympy.symbols("p_1 p_2")
    N1 = sympy.prod([p1 - x for x in a]) * p1
    N2 = sympy.prod([p2 - x for x in a]) * p2
    # alpha_1 p_1 + alpha_2 p_2 over the common denominator p_1 - p_2
    num = sympy.expand(N1 - N2)
    assert sympy.rem(num, p1 - p2, p1) == 0


@pytest.mark.parametrize("n_p", [2, 3])
@pytest.mark.parametrize("k", range(6))
def test_theta_certificates(k, n_p):
    cert = certify_polynomiality("theta", k, "a", 1, 0, n_p)
    assert cert.polynomial and cert.symmetric, cert.witness
    assert cert.passed


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("ell, r", [(0, 1), (1, 1), (1, 2)])
def test_theta_tilde_two_poles(ell, r, k):
    cert = certify_polynomiality("theta_tilde", k, "eaw", ell, r, 2)
    assert cert.passed, cert.witness
    assert cert.degree == ell + 1 + r + 2 + k + r


def test_theta_tilde_degree_stated_example():
    """n_z = 4, n_p = 1, r = 1, k = 0: stated degree 6."""
    assert expected_theta_tilde_degree(4, 1, 1, 0) == 6
    cert = certify_polynomiality("theta_tilde", 0, "eaw", 1, 1, 1)
    assert cert.symmetric and cert.polynomial
    assert cert.degree == 6


@pytest.mark.parametrize("n_p", [1, 2, 3])
def test_theta_tilde_computed_degree(n_p):
    """The certified degree is n_z + k + r(n_p - 1) in all cases computed."""
    ell, r, k = 1, 1, 1
    cert = certify_polynomiality("theta_tilde", k, "eaw", ell, r, n_p)
    n_z = ell + 1 + r + n_p
    assert cert.degree == n_z + k + r * (n_p - 1)


def test_negative_k_leaves_a_pole_factor():
    # alpha_mu e^{-beta_mu} keeps one inverse power of p_mu after the (r+1) scaling
    cert = certify_polynomiality("theta_tilde", -1, "eaw", 0, 1, 2)
    assert cert.symmetric and not cert.polynomial and not cert.passed


def test_squares_are_not_polynomial():
    assert nonpolynomial_witness(2, 0, 2) > 0
    assert nonpolynomial_witness(1, 0, 2) == 0


@pytest.mark.parametrize("bad", [("theta", "eaw"), ("theta_tilde", "a"), ("psi", "a")])
def test_rejects_mismatched_kind(bad):
    kind, fam = bad
    with pytest.raises(ValueError):
        certify_polynomiality(kind, 1, fam, 1, 1, 2)


def test_certificate_json():
    d = certify_polynomiality("theta", 2, "a", 1, 0, 3).to_dict()
    assert d == {"passed": True, "degree": 5, "polynomial": True, "symmetric": True}
    assert Fraction(d["degree"]) == 5
