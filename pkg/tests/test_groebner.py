import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R3, int_polys, polys
from fanocert.groebner import (
    Ideal,
    buchberger,
    groebner_basis,
    is_groebner,
    is_reduced,
    is_trivial,
    member,
    quotient_dimension,
    same_ideal,
    standard_monomials,
    vanishes_only_at_origin,
)
from fanocert.poly import DEGREVLEX, GRLEX, LEX, Polynomial, Ring, divides, normal_form, parse, parse_list, s_polynomial

R2 = Ring.from_names("x,y")


def naive_reduced_basis(gens, order):
    """Textbook Buchberger (every pair, no criteria), then interreduction."""
    g = [p for p in gens if not p.is_zero]
    pairs = [(i, j) for i in range(len(g)) for j in range(i)]
    while pairs:
        i, j = pairs.pop()
        r = normal_form(s_polynomial(g[i], g[j], order), g, order)
        if not r.is_zero:
            g.append(r)
            pairs.extend((len(g) - 1, k) for k in range(len(g) - 1))
    lm = lambda p: p.leading_monomial(order)
    minimal = []
    for i, p in enumerate(g):
        if any(divides(lm(q), lm(p)) and (lm(q) != lm(p) or k < i) for k, q in enumerate(g) if k != i):
            continue
        minimal.append(p)
    out = [normal_form(p, [q for q in minimal if q is not p], order).monic(order) for p in minimal]
    return sorted(out, key=lambda p: order.key(lm(p)), reverse=True)


@pytest.mark.parametrize("order", [LEX, GRLEX, DEGREVLEX], ids=str)
@settings(max_examples=40)
@given(data=st.data())
def test_agrees_with_naive_buchberger(order, data):
    ring = R2 if order is LEX else R3
    gens = data.draw(st.lists(int_polys(ring), min_size=1, max_size=3))
    gb = buchberger(Ideal(ring, tuple(gens)), order)
    assert list(gb.elements) == naive_reduced_basis(gens, order)


@settings(max_examples=25)
@given(st.lists(int_polys(), min_size=1, max_size=3))
def test_agrees_with_sympy(gens):
    sympy = pytest.importorskip("sympy")
    syms = sympy.symbols("x y z")
    exprs = [sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(s**k for s, k in zip(syms, e)) for e, c in g.terms.items()) for g in gens]
    theirs = sympy.groebner(exprs, *syms, order="grevlex")
    ours = buchberger(Ideal.of(gens), DEGREVLEX)
    as_ours = [parse(str(sympy.expand(p)).replace("**", "^"), R3).monic(DEGREVLEX) for p in theirs.exprs]
    assert sorted(map(str, ours.elements)) == sorted(map(str, as_ours))


@settings(max_examples=40)
@given(st.lists(int_polys(), min_size=1, max_size=3), st.sampled_from([LEX, GRLEX, DEGREVLEX]))
def test_emitted_bases_are_reduced_groebner_bases(gens, order):
    gb = buchberger(Ideal.of(gens), order)
    assert is_groebner(gb.elements, order)
    assert is_reduced(gb.elements, order)
    for g in gens:
        assert gb.contains(g)


@settings(max_examples=30)
@given(st.lists(int_polys(), min_size=2, max_size=4), st.randoms(use_true_random=False), st.sampled_from([LEX, DEGREVLEX]))
def test_reduced_basis_ignores_generator_order_and_scaling(gens, rnd, order):
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    scaled = [g * Fraction(rnd.choice([-3, -1, 2, 5]), rnd.choice([1, 7])) for g in shuffled]
    assert buchberger(Ideal.of(gens), order).elements == buchberger(Ideal.of(scaled), order).elements


@settings(max_examples=20)
@given(st.lists(int_polys(), min_size=1, max_size=3), st.sampled_from([LEX, DEGREVLEX]))
def test_parallel_pair_reduction_matches_serial(gens, order):
    ideal = Ideal.of(gens)
    assert buchberger(ideal, order, workers=1).elements == buchberger(ideal, order, workers=4).elements


def test_normal_form_idempotent_on_1000_random_polynomials():
    gb = groebner_basis(Ideal.of(parse_list("x^2*y - z, x*y^2 - x + 1, z^2 - y", R3)), DEGREVLEX)
    rnd = random.Random(20240611)
    for _ in range(1000):
        terms = {tuple(rnd.randint(0, 4) for _ in range(3)): Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(rnd.randint(0, 6))}
        p = Polynomial(R3, terms)
        r = gb.reduce(p)
        assert gb.reduce(r) == r
        assert gb.contains(p - r)


@given(polys(max_terms=3), polys(max_terms=3))
def test_membership_of_combinations(a, b):
    gens = parse_list("x*y - z^2, y^3 - x", R3)
    gb = groebner_basis(Ideal.of(gens), GRLEX)
    assert gb.contains(a * gens[0] + b * gens[1])


# -- predicates -------------------------------------------------------------------


def test_trivial_and_membership():
    assert is_trivial(Ideal.of(parse_list("x*y - 1, x", R2)))
    assert not is_trivial(Ideal.of(parse_list("x*y - 1", R2)))
    assert member(parse("x^2*y - x", R2), Ideal.of(parse_list("x*y - 1", R2)))
    assert not member(parse("x", R2), Ideal.of(parse_list("x^2", R2)))


def test_same_ideal_is_order_independent():
    a = parse_list("x^2 - y, y^2 - x", R2)
    b = parse_list("x^2 - y, x^4 - x, x*y - y^3 + y^3 - x*y + y^2 - x", R2)
    for order in (LEX, GRLEX, DEGREVLEX):
        assert same_ideal(a, b, order)
    assert not same_ideal(a, parse_list("x^2 - y", R2))


def test_quotient_dimension_matches_standard_monomial_count():
    # x^2 = y^3 = 0 with x*y^2 = 0: 1, y, y^2, x, x*y
    ideal = Ideal.of(parse_list("x^2, y^3, x*y^2", R2))
    assert quotient_dimension(ideal) == 5
    assert sorted(standard_monomials(groebner_basis(ideal, DEGREVLEX))) == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)]
    assert quotient_dimension(Ideal.of(parse_list("x*y", R2))) == "infinite"


def test_origin_certificate_states():
    cert = vanishes_only_at_origin(Ideal.of(parse_list("x^3, y^2 - x", R2)))
    assert cert and cert.status == "certified" and cert.powers == {"x": 3, "y": 6}
    refuted = vanishes_only_at_origin(Ideal.of(parse_list("x*y", R2)))
    assert refuted.status == "refuted" and not refuted
    point = vanishes_only_at_origin(Ideal.of(parse_list("x - 1, y", R2)))
    assert point.status == "refuted"
    # only y is claimed: a curve in x is fine
    partial = vanishes_only_at_origin(Ideal.of(parse_list("y^2", R3)), variables=["y"])
    assert partial.status == "certified"
    # x is free on a positive-dimensional set, but not all variables are listed
    unknown = vanishes_only_at_origin(Ideal.of(parse_list("y^2, x*z", R3)), variables=["x", "y"])
    assert unknown.status == "unknown"
    short = vanishes_only_at_origin(Ideal.of(parse_list("x^40, y", R2)), power_bound=8)
    assert short.status == "unknown"
    with pytest.raises(ValueError):
        vanishes_only_at_origin(Ideal.of(parse_list("x", R2)), power_bound=0)


def test_unit_ideal_basis():
    gb = buchberger(Ideal.of(parse_list("x + 1, x", R2)), LEX)
    assert gb.is_unit and gb.elements == (Polynomial.constant(R2, 1),)
