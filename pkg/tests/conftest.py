import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from fanocert.poly import Polynomial, Ring

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

R3 = Ring.from_names("x,y,z")


def exponents(arity=3, max_exp=3):
    return st.tuples(*[st.integers(0, max_exp)] * arity)


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def polys(draw, ring=R3, max_terms=4, max_exp=3, coeffs=coefficients):
    terms = draw(st.dictionaries(exponents(ring.arity, max_exp), coeffs, max_size=max_terms))
    return Polynomial(ring, terms)


@st.composite
def int_polys(draw, ring=R3, max_terms=3, max_exp=2):
    """Small integer polynomials, cheap enough for repeated Groebner computations."""
    terms = draw(st.dictionaries(exponents(ring.arity, max_exp), st.integers(-3, 3), min_size=1, max_size=max_terms))
    return Polynomial(ring, {e: Fraction(c) for e, c in terms.items()})


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
