from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import R3, int_polys
from fanocert.geometry import (
    AuxSystem,
    SmoothnessProblem,
    compare_partials,
    determinant,
    eliminate_linear,
    hypersurface_smoothness,
    jacobian,
    local_equation,
    minor_ideal,
    multiplier_system,
    multiplier_system_check,
    partials,
    point_is_singular,
    restrict,
)
from fanocert.groebner import Ideal, groebner_basis, member, quotient_dimension, same_ideal
from fanocert.poly import DEGREVLEX, Polynomial, Ring, parse, parse_list
from fanocert.singularity import TruncatedSeries, classify, milnor_number

P3 = Ring.from_names("x0,x1,x2,x3")
P4 = Ring.from_names("x0,x1,x2,x3,x4")
P5 = Ring.from_names("x0,x1,x2,x3,x4,x5")
P6 = Ring.from_names("x0,x1,x2,x3,x4,x5,x6")

F6 = "x0^2*x1^2*x2^2 + x0^2*x1^4 + x2^6 + x3*(x0^5 + x1^5 + x3^5)"
F4 = "x0*x1^3 + x0*x2^3 + x3^4 + x0*x1*x2*x3 + x4*(x0^3 + 2*x1^3 + x4^3)"
G4 = "x0*x1^3 + x0*x2^3 + x3^4 + x0*x1*x2*x3"
X222 = [
    "x0*x2 + x1*x3 - x4^2 - x5^2 - x6^2",
    "x0*x3 + x1*x2 - x5*x6",
    "x3^2 + x2*x4 + x0*(2*x0 + x1 + x5 + x6)",
]


def leibniz(m):
    """Determinant as a signed sum over permutations."""
    n = len(m)
    total = Polynomial.zero(m[0][0].ring)
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Polynomial.constant(m[0][0].ring, -1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = total + term
    return total


# -- matrices ------------------------------------------------------------------


@settings(max_examples=30)
@given(st.lists(int_polys(max_terms=2, max_exp=1), min_size=9, max_size=9))
def test_cofactor_determinant_matches_leibniz(entries):
    m = [entries[0:3], entries[3:6], entries[6:9]]
    assert determinant(m) == leibniz(m)


def test_jacobian_layout_and_variable_subset():
    f, g = parse_list("x^2*y, y + z^3", R3)
    assert jacobian([f, g]) == [partials(f), partials(g)]
    assert jacobian([f], ["z", "x"]) == [[Polynomial.zero(R3), parse("2*x*y", R3)]]


def test_minor_ideal_bounds_and_content():
    m = jacobian(parse_list("x*y, y*z", R3))
    two = minor_ideal(m, 2)
    # minors of [[y, x, 0], [0, z, y]]
    assert same_ideal(list(two.generators), parse_list("y*z, y^2, x*y", R3))
    with pytest.raises(ValueError):
        minor_ideal(m, 3)


def test_dependent_gradients_give_minors_in_the_multiplier_ideal():
    """Dx0 = l*Df1 + m*Df2 forces every 3x3 minor of [Dx0; Df1; Df2] to vanish."""
    f1, f2 = (parse(t, P5) for t in ("x0^2 + x1*x2 - x3^2 - x4^2 - x5^2", "x0^3 + x0*x1^2 + x0*x2^2 + x1*x2^2 + x3*x4*x5"))
    x0 = Polynomial.variable(P5, "x0")
    eqs = multiplier_system([], partials(x0), [partials(f1), partials(f2)], ["l", "m"])
    ext = eqs[0].ring
    lift = lambda p: parse(str(p), ext)
    minors = minor_ideal(jacobian([lift(x0), lift(f1), lift(f2)]), 3)
    ideal = Ideal(ext, tuple(eqs))
    for g in minors.generators:
        assert member(g, ideal, DEGREVLEX)


# -- hypersurfaces ----------------------------------------------------------------


def test_sextic_branch_surface_is_smooth():
    reports = hypersurface_smoothness(parse(F6, P3), "x3")
    assert [r.verdict for r in reports] == ["trivial", "origin-only"]


def test_quartic_is_smooth():
    reports = hypersurface_smoothness(parse(F4, P4), "x4")
    assert all(r.ok for r in reports)


def test_singular_surfaces_are_rejected():
    # the quartic section H has singular points, some with x4 = 0 trivially
    g = parse(G4, P3)
    assert not all(r.ok for r in hypersurface_smoothness(g, "x0"))
    cone = parse("x0^2 + x1^2 - x2^2", Ring.from_names("x0,x1,x2,x3"))
    reports = hypersurface_smoothness(cone, "x3")
    assert reports[0].verdict == "failed"


def test_compare_partials_flags_only_the_wrong_entry():
    f = parse(F4, P4)
    shown = parse_list(
        "x1^3 + x2^3 + x1*x2*x3 + 3*x0^2*x4, 3*x1^2*x0 + x0*x2*x3 + 2*x4*x1^2,"
        "3*x2^2*x0 + x0*x1*x3, 4*x3^3 + x0*x1*x2, x0^3 + 2*x1^3 + 4*x4^3",
        P4,
    )
    rows = compare_partials(f, shown)
    assert [name for name, ok, _ in rows if not ok] == ["x1"]
    assert rows[1][2] == parse("3*x1^2*x0 + x0*x2*x3 + 6*x4*x1^2", P4)
    with pytest.raises(ValueError):
        compare_partials(f, shown[:4])


# -- multiplier systems ---------------------------------------------------------------


def test_multiplier_system_reproduces_the_printed_quadric_cubic_input():
    f1 = parse("x0^2 + x1*x2 - x3^2 - x4^2 - x5^2", P5)
    f2 = parse("x0^3 + x0*x1^2 + x0*x2^2 + x1*x2^2 + x3*x4*x5", P5)
    eqs = multiplier_system([f1, f2], partials(f1), [partials(f2)], ["lambda"])
    printed = parse_list(
        "x0^2 + x1*x2 - x3^2 - x4^2 - x5^2, x0^3 + x0*x1^2 + x0*x2^2 + x1*x2^2 + x3*x4*x5,"
        "2*x0 - lambda*(3*x0^2 + x1^2 + x2^2), x2 - lambda*(2*x1*x0 + x2^2), x1 - 2*lambda*x2*(x0 + x1),"
        "-2*x3 - lambda*x4*x5, -2*x4 - lambda*x3*x5, -2*x5 - lambda*x3*x4",
        eqs[0].ring,
    )
    assert same_ideal(eqs, printed, DEGREVLEX)


def test_fixed_coordinates_are_dropped_from_the_ring():
    f1 = parse("x0^2 + x1*x2 - x3^2 - x4^2 - x5^2", P5)
    x0 = Polynomial.variable(P5, "x0")
    eqs = multiplier_system([f1], partials(x0), [partials(f1)], ["l"], fixed={"x0": 0})
    assert eqs[0].ring.names == ("x1", "x2", "x3", "x4", "x5", "l")
    # first gradient entry becomes 1 - l*2*x0 = 1 once x0 = 0
    assert Polynomial.constant(eqs[0].ring, 1) in eqs


def test_smoothness_problem_runs_each_auxiliary_system():
    ring = Ring.from_names("x,y,l")
    aux = (
        AuxSystem("unit", Ideal.of(parse_list("x*l - 1, x", ring)), "trivial"),
        AuxSystem("point", Ideal.of(parse_list("x^2, y^3, l", ring)), "origin-only"),
        AuxSystem("curve", Ideal.of(parse_list("x*y, l", ring)), "origin-only"),
        # l is unconstrained and unlisted, so nothing can be decided about x
        AuxSystem("partial", Ideal.of(parse_list("x*y", ring)), "origin-only", ("x", "y")),
    )
    problem = SmoothnessProblem(Ring.from_names("x,y"), (), aux)
    verdicts = multiplier_system_check(problem)
    assert [v.status for v in verdicts] == ["pass", "pass", "fail", "inconclusive"]
    with pytest.raises(ValueError):
        SmoothnessProblem(Ring.from_names("w"), (), aux)


# -- local equations ----------------------------------------------------------------------


def test_restrict_sets_constants():
    out = restrict(parse_list("x*y + z, y - 2", R3), {"y": Fraction(1, 2)})
    assert [str(p) for p in out] == ["1/2*x + z", "-3/2"]


def test_eliminate_linear_requires_a_matching_generator():
    ideal = Ideal.of(parse_list("2*x - 2*y^2, x*z - 1", R3))
    out = eliminate_linear(ideal, "x", parse("y^2", R3))
    assert list(out.generators) == [parse("y^2*z - 1", R3)]
    with pytest.raises(ValueError):
        eliminate_linear(ideal, "z", parse("y", R3))
    with pytest.raises(ValueError):
        eliminate_linear(ideal, "x", parse("x*y", R3))


def test_sextic_branch_curve_charts():
    f6 = parse(F6, P3)
    (rp,) = local_equation([f6], {"x3": 0, "x0": 1})
    assert rp == parse("x1^2*x2^2 + x1^4 + x2^6", rp.ring)


def test_quartic_section_at_p_is_a_cusp():
    (h,) = local_equation([parse(F4, P4)], {"x4": 0, "x0": 1})
    assert str(classify(TruncatedSeries(h, 12))) == "Tpqr(3,3,4)"


def test_quartic_section_at_q0_after_shift():
    (h,) = local_equation([parse(F4, P4)], {"x4": 0, "x1": 1}, shifts={"x2": "x2 - 1"})
    assert str(classify(TruncatedSeries(h, 12))) == "An(3)"
    assert milnor_number(h) == 3


def test_triple_quadric_section_local_equations():
    polys = [parse(t, P6) for t in X222]
    (hp,) = local_equation(polys, {"x0": 0, "x1": 1}, [("x3", "x4^2 + x5^2 + x6^2"), ("x2", "x5*x6")])
    assert str(classify(TruncatedSeries(hp, 12))) == "Tpqr(4,4,4)"
    (hq,) = local_equation(polys, {"x0": 0, "x2": 1}, [("x1", "x5*x6"), ("x4", "-x3^2")])
    want = parse("x5^2 + x6^2 - x3*x5*x6 + x3^4", hq.ring)
    assert hq == want * -1 or hq == want
    assert str(classify(TruncatedSeries(hq, 12))) == "An(3)"


# -- points ----------------------------------------------------------------------------------


def test_quartic_singular_points_including_cube_roots_of_unity():
    dg = partials(parse(G4, P3))
    E = Ring.from_names("e")
    e = Polynomial.variable(E, "e")
    rel = [e * e + e + 1]
    assert point_is_singular(dg, [1, 0, 0, 0])
    assert point_is_singular(dg, [0, 1, -1, 0])
    for k in (1, 2):
        pt = [Polynomial.constant(E, 0), Polynomial.constant(E, 1), -(e**k), Polynomial.constant(E, 0)]
        assert point_is_singular(dg, pt, rel)
    # without the relation the coordinate is not a cube root of -1
    assert not point_is_singular(dg, [Polynomial.constant(E, 0), Polynomial.constant(E, 1), -e, Polynomial.constant(E, 0)])
    assert not point_is_singular(dg, [0, 1, 1, 0])
    with pytest.raises(ValueError):
        point_is_singular(dg, [0, 1])


def test_quartic_section_has_exactly_the_listed_singular_points_off_x0():
    # on the chart x1 = 1 with x0 = 0 the singular scheme has length 9:
    # three A3 points, each with Milnor number 3
    dg = partials(parse(G4, P3))
    ideal = Ideal.of(dg + parse_list("x0, x1 - 1", P3))
    gb = groebner_basis(ideal, DEGREVLEX)
    assert gb.contains(parse("(x2^3 + 1)^3", P3))
    assert quotient_dimension(ideal) == 9
