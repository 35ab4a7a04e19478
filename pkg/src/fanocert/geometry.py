"""Smoothness certificates for projective hypersurfaces and complete intersections.

The checks reduce geometric statements to Groebner-basis predicates:

* a hypersurface ``f = 0`` is smooth when the partials have no common
  projective zero, shown chart by chart (``x = 1`` gives the unit ideal,
  ``x = 0`` leaves only the origin);
* rank drops of a Jacobian are encoded with multiplier variables, e.g.
  ``Dg = lambda*Df_1 + mu*Df_2``, and the resulting systems are fed to the
  same predicates;
* local equations of hyperplane sections come from fixing chart coordinates
  and eliminating variables that appear linearly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .groebner import (
    DEFAULT_POWER_BOUND,
    GroebnerBasis,
    Ideal,
    OriginCertificate,
    groebner_basis,
    ideal_sum,
    vanishes_only_at_origin,
)
from .poly import LEX, MonomialOrder, Polynomial, Ring, substitute

Matrix = list[list[Polynomial]]


def partials(f: Polynomial) -> list[Polynomial]:
    return [f.diff(i) for i in range(f.ring.arity)]


def jacobian(polys: Sequence[Polynomial], variables: Sequence[str | int] | None = None) -> Matrix:
    """Entry ``(i, j)`` is the derivative of ``polys[i]`` by the j-th variable."""
    if not polys:
        return []
    ring = polys[0].ring
    idx = range(ring.arity) if variables is None else [ring.index(v) for v in variables]
    return [[p.diff(j) for j in idx] for p in polys]


def determinant(m: Matrix) -> Polynomial:
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = Polynomial.zero(m[0][0].ring)
    for j, entry in enumerate(m[0]):
        if entry.is_zero:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = entry * determinant(minor)
        total = total - term if j % 2 else total + term
    return total


def minor_ideal(m: Matrix, k: int) -> Ideal:
    """Ideal of all ``k x k`` minors of ``m``."""
    rows, cols = len(m), len(m[0]) if m else 0
    if not 1 <= k <= min(rows, cols):
        raise ValueError(f"minor size {k} out of range for a {rows}x{cols} matrix")
    ring = m[0][0].ring
    gens = []
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            d = determinant([[m[r][c] for c in cs] for r in rs])
            if not d.is_zero:
                gens.append(d)
    return Ideal(ring, tuple(gens))


# -- hypersurfaces -------------------------------------------------------------


@dataclass(frozen=True)
class ChartReport:
    """Outcome of one half of the ``{x = 1} u {x = 0}`` chart split."""

    variable: str
    value: int
    verdict: str  # "trivial", "origin-only" or "failed"
    certificate: GroebnerBasis | OriginCertificate
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.verdict != "failed"


def hypersurface_smoothness(
    f: Polynomial,
    chart_var: str | int | None = None,
    order: MonomialOrder = LEX,
    power_bound: int = DEFAULT_POWER_BOUND,
) -> list[ChartReport]:
    """Certify that the partials of ``f`` have no common projective zero.

    The chart variable defaults to the last one.  Both reports must be ok for
    the hypersurface to be smooth.
    """
    ring = f.ring
    i = ring.arity - 1 if chart_var is None else ring.index(chart_var)
    name = ring.names[i]
    a = Ideal(ring, tuple(p for p in partials(f) if not p.is_zero), "partials")
    x = Polynomial.variable(ring, i)
    reports = []
    gb = groebner_basis(ideal_sum(a, [x - 1]), order)
    reports.append(
        ChartReport(name, 1, "trivial" if gb.is_unit else "failed", gb, "" if gb.is_unit else "partials meet the chart")
    )
    cert = vanishes_only_at_origin(ideal_sum(a, [x]), power_bound, order)
    reports.append(ChartReport(name, 0, "origin-only" if cert else "failed", cert, cert.reason))
    return reports


def compare_partials(f: Polynomial, displayed: Sequence[Polynomial]) -> list[tuple[str, bool, Polynomial]]:
    """Check a transcribed list of partials against those recomputed from ``f``.

    Returns ``(variable, matches, recomputed)`` per entry.
    """
    if len(displayed) != f.ring.arity:
        raise ValueError(f"expected {f.ring.arity} partials, got {len(displayed)}")
    return [(f.ring.names[i], d == f.diff(i), f.diff(i)) for i, d in enumerate(displayed)]


# -- multiplier systems ------------------------------------------------------------


@dataclass(frozen=True)
class AuxSystem:
    """A labelled auxiliary ideal with the certificate it is expected to admit."""

    label: str
    ideal: Ideal
    expect: str  # "trivial" or "origin-only"
    variables: tuple[str, ...] | None = None


@dataclass(frozen=True)
class SmoothnessProblem:
    ring: Ring
    defining_polys: tuple[Polynomial, ...]
    auxiliary_systems: tuple[AuxSystem, ...] = ()
    name: str = ""

    def __post_init__(self):
        for p in self.defining_polys:
            if p.ring != self.ring:
                raise ValueError(f"{p} is not in {self.ring}")
        for aux in self.auxiliary_systems:
            if not set(self.ring.names) <= set(aux.ideal.ring.names):
                raise ValueError(f"auxiliary ring of {aux.label} does not extend {self.ring}")


@dataclass(frozen=True)
class AuxVerdict:
    label: str
    status: str  # "pass", "fail" or "inconclusive"
    certificate: GroebnerBasis | OriginCertificate


def multiplier_system_check(
    problem: SmoothnessProblem, order: MonomialOrder = LEX, power_bound: int = DEFAULT_POWER_BOUND
) -> list[AuxVerdict]:
    out = []
    for aux in problem.auxiliary_systems:
        if aux.expect == "trivial":
            gb = groebner_basis(aux.ideal, order)
            out.append(AuxVerdict(aux.label, "pass" if gb.is_unit else "fail", gb))
        elif aux.expect == "origin-only":
            cert = vanishes_only_at_origin(aux.ideal, power_bound, order, aux.variables)
            status = {"certified": "pass", "refuted": "fail"}.get(cert.status, "inconclusive")
            out.append(AuxVerdict(aux.label, status, cert))
        else:
            raise ValueError(f"unknown expectation {aux.expect!r} for {aux.label}")
    return out


def multiplier_system(
    defining: Sequence[Polynomial],
    target: Sequence[Polynomial],
    rows: Sequence[Sequence[Polynomial]],
    multipliers: Sequence[str],
    fixed: Mapping[str, int] | None = None,
) -> list[Polynomial]:
    """Equations for ``target = sum_i m_i * rows[i]`` together with ``defining``.

    ``target`` and ``rows`` are gradient rows over the base ring.  The
    multipliers are appended as new variables; ``fixed`` then restricts to a
    coordinate subspace and drops those coordinates from the ring.
    """
    base = defining[0].ring if defining else target[0].ring
    ext = base.extend(multipliers)
    lift = {n: Polynomial.variable(ext, n) for n in base.names}
    ms = [Polynomial.variable(ext, n) for n in multipliers]

    def up(p: Polynomial) -> Polynomial:
        return substitute(p, lift, ext)

    eqs = [up(p) for p in defining]
    for j, t in enumerate(target):
        e = up(t)
        for m, row in zip(ms, rows):
            e = e - m * up(row[j])
        eqs.append(e)
    if fixed:
        eqs = restrict(eqs, fixed)
    return [e for e in eqs if not e.is_zero]


def restrict(polys: Sequence[Polynomial], fixed: Mapping[str, object]) -> list[Polynomial]:
    """Set the ``fixed`` coordinates to constants and drop them from the ring."""
    if not polys:
        return []
    ring = polys[0].ring
    keep = [n for n in ring.names if n not in fixed]
    sub = Ring(tuple(keep), tuple(w for n, w in zip(ring.names, ring.weights) if n not in fixed))
    mapping = {n: Fraction(v) for n, v in fixed.items()}
    mapping.update({n: Polynomial.variable(sub, n) for n in keep})
    return [substitute(p, mapping, sub) for p in polys]


def eliminate_linear(ideal: Ideal, var: str | int, expr: Polynomial) -> Ideal:
    """Use a generator of the form ``c*(var - expr)`` to substitute ``var`` away.

    The generator is dropped and ``var`` is replaced by ``expr`` in the others.
    """
    ring = ideal.ring
    i = ring.index(var)
    x = Polynomial.variable(ring, i)
    rel = x - expr
    if expr.variables() & {i}:
        raise ValueError("the eliminated variable must not occur in its replacement")
    found = None
    for k, g in enumerate(ideal.generators):
        c = g.coefficient(tuple(int(j == i) for j in range(ring.arity)))
        if c and g == rel * c:
            found = k
            break
    if found is None:
        raise ValueError(f"no generator equals a multiple of {rel}")
    rest = [substitute(g, {i: expr}) for k, g in enumerate(ideal.generators) if k != found]
    return Ideal(ring, tuple(g for g in rest if not g.is_zero), ideal.label)


def local_equation(
    polys: Sequence[Polynomial],
    fixed: Mapping[str, object],
    eliminations: Sequence[tuple[str, str]] = (),
    shifts: Mapping[str, str] | None = None,
) -> list[Polynomial]:
    """Generators of a chart neighbourhood after linear eliminations.

    ``eliminations`` lists ``(variable, replacement text)`` pairs applied in
    order; ``shifts`` is a final substitution such as ``x2 -> x2 - 1``
    moving the point of interest to the origin.  Eliminated variables are
    removed from the ring of the result.
    """
    from .poly import parse

    cur = restrict(polys, fixed)
    ring = cur[0].ring
    ideal = Ideal(ring, tuple(cur))
    for var, text in eliminations:
        ideal = eliminate_linear(ideal, var, parse(text, ring))
    gone = {v for v, _ in eliminations}
    keep = [n for n in ring.names if n not in gone]
    sub = Ring(tuple(keep))
    images = {n: Polynomial.variable(sub, n) for n in keep}
    images.update({v: Polynomial.zero(sub) for v in gone})
    if shifts:
        images.update({v: parse(t, sub) for v, t in shifts.items()})
    return [substitute(g, images, sub) for g in ideal.generators]


# -- points ------------------------------------------------------------------------------


def point_is_singular(
    polys: Sequence[Polynomial],
    point: Sequence[Polynomial | Fraction | int],
    relations: Sequence[Polynomial] = (),
) -> bool:
    """True iff every polynomial in ``polys`` vanishes at ``point``.

    Coordinates may be rationals or polynomials in auxiliary symbols bound by
    ``relations`` (e.g. ``e^2 + e + 1`` for a primitive cube root of unity);
    vanishing is then decided modulo those relations.
    """
    if not polys:
        return True
    ring = polys[0].ring
    if len(point) != ring.arity:
        raise ValueError(f"point has {len(point)} coordinates, ring has {ring.arity}")
    coords = [c for c in point if isinstance(c, Polynomial)]
    if not coords:
        return all(p.evaluate(point) == 0 for p in polys)
    target = coords[0].ring
    images = {
        i: (c if isinstance(c, Polynomial) else Polynomial.constant(target, c)) for i, c in enumerate(point)
    }
    gb = groebner_basis(Ideal(target, tuple(relations)), LEX) if relations else None
    for p in polys:
        v = substitute(p, images, target)
        if gb is not None:
            v = gb.reduce(v)
        if not v.is_zero:
            return False
    return True
