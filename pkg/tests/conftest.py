from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ratfrob.core import ExpPoly, exponential, ordinary

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

X, Y, B = ordinary("x"), ordinary("y"), ordinary("b")
EB = exponential("b")

small_fractions = st.builds(
    Fraction, st.integers(-9, 9), st.integers(1, 4)
)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)


@st.composite
def expolys(draw, gens=(X, Y, EB), max_terms=4, max_deg=3):
    """Small exponential polynomials; exponential generators may carry negative powers."""
    total = ExpPoly.constant(draw(small_fractions))
    for _ in range(draw(st.integers(0, max_terms))):
        term = ExpPoly.constant(draw(nonzero_fractions))
        for g in gens:
            lo = -max_deg if g.laurent else 0
            term = term * ExpPoly.var(g, draw(st.integers(lo, max_deg)))
        total = total + term
    return total


@pytest.fixture(scope="session")
def polys():
    return expolys


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
