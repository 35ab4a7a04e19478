"""Line-oriented scenario files and the task runner behind the command line.

A scenario declares rings, polynomials, ideals, local equations and dual
complexes, each followed by ``expect`` lines.  Every ``expect`` line is one
task; tasks are checked independently and collected into a report.

Lines starting with ``#`` are comments; a line starting with whitespace
continues the previous one.  Declarations::

    scenario <name>
    note <free text>
    ring <R> = x0,x1,x2 [weights 1,1,3]
    poly <f> in <R> = <expr>
    ideal <I> in <R> [order <ord>] = <gen>, <gen>, ...
    ideal <I> = partials <f>
    ideal <I> = <J> + <gen>, ...
    system <S> from f1,f2 target <expr> rows f1,f2 multipliers lambda,mu [chart x0=0]
    local <L> vars u,x,y [trunc N] : <expr>
    derive <L> from f1,f2 chart x0=0,x1=1 [eliminate x2=<expr>; ...] [shift x2=<expr>]
    identity <name> vars a,b,e [mod <rel>, ...] [subs a=<expr>, ...] : <lhs> = <rhs>
    point <P> of <I> at c1,c2,... [vars e] [mod <rel>, ...]
    complex <C> [dimx N] : vertices a,b,c ; cells {a,b}:2 {a,b,c}
    lemma43 <C> [dimx N] : components D,E ; flags <flag> ...
    resolution <G> = p,q,r
    problem <name> vars x0,x1,... | problem <name> in <R>
    poly <f>: <expr>                        (inside a problem)
    chart x3=1 expect trivial               (partials of the problem's polynomial)
    aux <label> vars +lambda,mu : <gen>, ... expect origin-only
"""

from __future__ import annotations

import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import dualcomplex as dc
from . import geometry as geo
from . import singularity as sg
from .groebner import (
    DEFAULT_POWER_BOUND,
    Ideal,
    groebner_basis,
    ideal_sum,
    same_ideal,
    quotient_dimension,
    vanishes_only_at_origin,
)
from .poly import DEGREVLEX, LEX, ORDERS, MonomialOrder, ParseError, Polynomial, Ring, parse, parse_list, substitute


class ScenarioError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class Settings:
    order: MonomialOrder | None = None
    trunc: int | None = None
    threads: int = 1
    power_bound: int = DEFAULT_POWER_BOUND
    only: str | None = None


@dataclass
class Obj:
    name: str
    kind: str
    value: Any
    order: MonomialOrder = LEX
    meta: dict = field(default_factory=dict)


@dataclass
class Task:
    index: int
    name: str
    obj: str
    lineno: int
    check: Callable[[Settings], tuple[str, dict]]


@dataclass
class Scenario:
    name: str = ""
    notes: list[str] = field(default_factory=list)
    objects: dict[str, Obj] = field(default_factory=dict)
    tasks: list[Task] = field(default_factory=list)


# -- reading ---------------------------------------------------------------------------


def _logical_lines(text: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip() if not raw.lstrip().startswith("#") else ""
        if not line.strip():
            continue
        if line[0].isspace() and out:
            ln, prev = out[-1]
            out[-1] = (ln, prev + " " + line.strip())
        else:
            out.append((n, line.strip()))
    return out


def _order(token: str, lineno: int) -> MonomialOrder:
    try:
        return ORDERS[token]
    except KeyError:
        raise ScenarioError(lineno, f"unknown monomial order {token!r}") from None


def _names(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _assignments(text: str, sep: str = ",") -> list[tuple[str, str]]:
    out = []
    for part in text.split(sep):
        if not part.strip():
            continue
        if "=" not in part:
            raise ValueError(f"expected name=value in {part.strip()!r}")
        k, v = part.split("=", 1)
        out.append((k.strip(), v.strip()))
    return out


class _Reader:
    def __init__(self):
        self.sc = Scenario()
        self.rings: dict[str, Ring] = {}
        self.last: Obj | None = None
        self.problem: Obj | None = None

    # helpers
    def obj(self, name: str, lineno: int, *kinds: str) -> Obj:
        o = self.sc.objects.get(name)
        if o is None:
            raise ScenarioError(lineno, f"{name!r} is not declared")
        if kinds and o.kind not in kinds:
            raise ScenarioError(lineno, f"{name!r} is a {o.kind}, expected {' or '.join(kinds)}")
        return o

    def declare(self, o: Obj, lineno: int):
        if o.name in self.sc.objects:
            raise ScenarioError(lineno, f"{o.name!r} declared twice")
        self.sc.objects[o.name] = o
        self.last = o

    def ring(self, name: str, lineno: int) -> Ring:
        if name not in self.rings:
            raise ScenarioError(lineno, f"ring {name!r} is not declared")
        return self.rings[name]

    def polys(self, names: str, lineno: int) -> list[Polynomial]:
        return [self.obj(n, lineno, "poly").value for n in _names(names)]

    # statements
    def feed(self, lineno: int, line: str):
        head, _, rest = line.partition(" ")
        handler = getattr(self, "do_" + head.replace("-", "_"), None)
        if handler is None:
            raise ScenarioError(lineno, f"unknown statement {head!r}")
        try:
            handler(lineno, rest.strip())
        except ScenarioError:
            raise
        except (ParseError, dc.DeclarationError, ValueError) as exc:
            raise ScenarioError(lineno, str(exc)) from None

    def do_scenario(self, lineno, rest):
        self.sc.name = rest

    def do_note(self, lineno, rest):
        self.sc.notes.append(rest)

    def do_ring(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s*=\s*(.+?)(?:\s+weights\s+([\d,\s]+))?", rest)
        if not m:
            raise ScenarioError(lineno, "expected: ring <name> = x,y,z [weights 1,1,1]")
        weights = [int(w) for w in _names(m.group(3))] if m.group(3) else []
        self.rings[m.group(1)] = Ring.from_names(_names(m.group(2)), weights)

    def do_poly(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+in\s+(\w+)\s*=\s*(.+)", rest)
        if m:
            self.declare(Obj(m.group(1), "poly", parse(m.group(3), self.ring(m.group(2), lineno))), lineno)
            return
        m = re.fullmatch(r"(\w+)\s*:\s*(.+)", rest)
        if m and self.problem is not None:
            f = parse(m.group(2), self.problem.value.ring)
            self.declare(Obj(m.group(1), "poly", f), lineno)
            self.problem.meta["polys"].append(f)
            return
        raise ScenarioError(lineno, "expected: poly <name> in <ring> = <expr> (or poly <name>: <expr> inside a problem)")

    def do_problem(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+(?:vars\s+(\S+)|in\s+(\w+))", rest)
        if not m:
            raise ScenarioError(lineno, "expected: problem <name> vars x0,x1,... | problem <name> in <ring>")
        ring = Ring.from_names(_names(m.group(2))) if m.group(2) else self.ring(m.group(3), lineno)
        self.problem = Obj(m.group(1), "problem", Ideal(ring, ()), meta={"polys": []})
        self.declare(self.problem, lineno)

    def _problem_ideal(self, lineno) -> tuple[Obj, Ideal]:
        if self.problem is None or not self.problem.meta["polys"]:
            raise ScenarioError(lineno, "chart/aux lines need a problem with a polynomial")
        polys = self.problem.meta["polys"]
        if len(polys) == 1:
            gens = [g for g in geo.partials(polys[0]) if not g.is_zero]
        else:
            gens = list(polys)
        return self.problem, Ideal(polys[0].ring, tuple(gens), self.problem.name)

    def do_chart(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s*=\s*([01])\s+expect\s+(.+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: chart x=1 expect trivial | chart x=0 expect origin-only")
        prob, ideal = self._problem_ideal(lineno)
        x = Polynomial.variable(ideal.ring, m.group(1))
        chart = ideal_sum(ideal, [x - int(m.group(2))], f"{prob.name}[{m.group(1)}={m.group(2)}]")
        self._inline(Obj(chart.label, "ideal", chart), m.group(3), lineno)

    def do_aux(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+vars\s+\+(\S+)\s*:\s*(.+?)\s+expect\s+(.+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: aux <label> vars +lambda,mu : <generators> expect trivial|origin-only")
        prob, _ = self._problem_ideal(lineno)
        ring = prob.value.ring.extend(_names(m.group(2)))
        aux = Ideal(ring, tuple(parse_list(m.group(3), ring)), m.group(1))
        o = Obj(m.group(1), "ideal", aux)
        self.declare(o, lineno)
        self._inline(o, m.group(4), lineno)

    def _inline(self, o: Obj, expectation: str, lineno: int):
        check, label = _make_check(o, expectation, lineno, self)
        idx = len(self.sc.tasks)
        self.sc.tasks.append(Task(idx, f"{o.name}:{label}", o.name, lineno, check))

    def do_ideal(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+in\s+(\w+)(?:\s+order\s+(\w+))?\s*=\s*(.+)", rest)
        if m:
            ring = self.ring(m.group(2), lineno)
            order = _order(m.group(3), lineno) if m.group(3) else LEX
            ideal = Ideal(ring, tuple(parse_list(m.group(4), ring)), m.group(1))
            self.declare(Obj(m.group(1), "ideal", ideal, order, {"generators": m.group(4)}), lineno)
            return
        m = re.fullmatch(r"(\w+)\s*=\s*partials\s+(\w+)", rest)
        if m:
            f = self.obj(m.group(2), lineno, "poly").value
            gens = tuple(p for p in geo.partials(f) if not p.is_zero)
            self.declare(Obj(m.group(1), "ideal", Ideal(f.ring, gens, m.group(1))), lineno)
            return
        m = re.fullmatch(r"(\w+)\s*=\s*(\w+)\s*\+\s*(.+)", rest)
        if m:
            base = self.obj(m.group(2), lineno, "ideal", "system")
            extra = parse_list(m.group(3), base.value.ring)
            self.declare(Obj(m.group(1), "ideal", ideal_sum(base.value, extra, m.group(1)), base.order), lineno)
            return
        raise ScenarioError(lineno, "malformed ideal declaration")

    def do_system(self, lineno, rest):
        m = re.fullmatch(
            r"(\w+)\s+from\s+(\S+)\s+target\s+(.+?)\s+rows\s+(\S+)\s+multipliers\s+(\S+)(?:\s+chart\s+(\S+))?", rest
        )
        if not m:
            raise ScenarioError(lineno, "expected: system <name> from f,g target <expr> rows f,g multipliers a,b [chart x=0]")
        defining = self.polys(m.group(2), lineno)
        ring = defining[0].ring
        tgt = self.sc.objects.get(m.group(3))
        target_poly = tgt.value if tgt is not None and tgt.kind == "poly" else parse(m.group(3), ring)
        target = geo.jacobian([target_poly])[0]
        rows = geo.jacobian(self.polys(m.group(4), lineno))
        fixed = {k: Fraction(v) for k, v in _assignments(m.group(6) or "")}
        eqs = geo.multiplier_system(defining, target, rows, _names(m.group(5)), fixed)
        self.declare(Obj(m.group(1), "system", Ideal(eqs[0].ring, tuple(eqs), m.group(1))), lineno)

    def do_local(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+vars\s+(\S+)(?:\s+trunc\s+(\d+))?\s*:\s*(.+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: local <name> vars x,y,z [trunc N] : <expr>")
        ring = Ring.from_names(_names(m.group(2)))
        f = parse(m.group(4), ring)
        self.declare(Obj(m.group(1), "local", f, meta={"trunc": int(m.group(3)) if m.group(3) else None}), lineno)

    def do_derive(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+from\s+(\S+)\s+(.*)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: derive <name> from f,g chart ... [eliminate ...] [shift ...]")
        parts = re.split(r"\s*\b(chart|eliminate|shift)\b\s*", " " + m.group(3))
        clauses = dict(zip(parts[1::2], parts[2::2]))
        if "chart" not in clauses:
            raise ScenarioError(lineno, "derive needs a chart clause")
        fixed = {k: Fraction(v) for k, v in _assignments(clauses["chart"])}
        elim = _assignments(clauses.get("eliminate", ""), ";")
        shift = dict(_assignments(clauses.get("shift", ""), ";")) or None
        gens = geo.local_equation(self.polys(m.group(2), lineno), fixed, elim, shift)
        self.declare(Obj(m.group(1), "derived", gens), lineno)

    def do_identity(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+vars\s+(\S+)(.*?)\s*:\s*(.+?)\s*=\s*(.+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: identity <name> vars ... [mod ...] [subs ...] : lhs = rhs")
        ring = Ring.from_names(_names(m.group(2)))
        parts = re.split(r"\s*\b(mod|subs)\b\s*", " " + m.group(3))
        clauses = dict(zip(parts[1::2], parts[2::2]))
        rels = parse_list(clauses["mod"], ring) if clauses.get("mod") else []
        subs = {k: parse(v, ring) for k, v in _assignments(clauses.get("subs", ""))}
        lhs = substitute(parse(m.group(4), ring), subs) if subs else parse(m.group(4), ring)
        rhs = parse(m.group(5), ring)
        self.declare(Obj(m.group(1), "identity", (lhs, rhs, rels)), lineno)

    def do_point(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s+of\s+(\w+)\s+at\s+(.+?)(?:\s+vars\s+(\S+))?(?:\s+mod\s+(.+))?", rest)
        if not m:
            raise ScenarioError(lineno, "expected: point <name> of <ideal> at c1,c2,... [vars e] [mod rel]")
        target = self.obj(m.group(2), lineno, "ideal", "system")
        if m.group(4):
            ring = Ring.from_names(_names(m.group(4)))
            coords: list = parse_list(m.group(3), ring)
            rels = parse_list(m.group(5), ring) if m.group(5) else []
        else:
            coords = [Fraction(c) for c in _names(m.group(3))]
            rels = []
        self.declare(Obj(m.group(1), "point", (target.value, coords, rels)), lineno)

    def do_complex(self, lineno, rest):
        m = re.fullmatch(r"(\w+)(?:\s+dimx\s+(\d+))?\s*:\s*(.+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: complex <name> [dimx N] : vertices a,b ; cells {a,b}:2 ... [; assert ...]")
        verts, cells, asserts = None, [], []
        for clause in (c.strip() for c in m.group(3).split(";")):
            word, _, body = clause.partition(" ")
            if word == "vertices":
                verts = _names(body)
            elif word == "cells":
                body = re.sub(r"\bdim\d+\b", " ", body)
                for grp, mult in re.findall(r"\{([^}]*)\}(?::(\d+))?", body):
                    cells.append((_names(grp), int(mult) if mult else 1))
            elif word == "assert":
                asserts.append(body.strip())
            elif clause:
                raise ScenarioError(lineno, f"unknown complex clause {clause!r}")
        if verts is None:
            raise ScenarioError(lineno, "complex needs a vertices clause")
        c = dc.build_complex(verts, cells, name=m.group(1))
        o = Obj(m.group(1), "complex", c, meta={"dimx": int(m.group(2)) if m.group(2) else None})
        self.declare(o, lineno)
        for a in asserts:
            self._inline(o, a, lineno)

    def do_lemma43(self, lineno, rest):
        m = re.fullmatch(r"(\w+)(?:\s+dimx\s+(\d+))?\s*:\s*components\s+([^;]+?)\s*(?:;\s*flags\s+(.*))?", rest)
        if not m:
            raise ScenarioError(lineno, "expected: lemma43 <name> [dimx N] : components D,E ; flags ...")
        comps = _names(m.group(3))
        if len(comps) != 2:
            raise ScenarioError(lineno, "lemma43 takes exactly two components")
        flags = (m.group(4) or "").split()
        known = {"du_val", "nodal_genus_one_intersection", "intersection_in_smooth_locus", "ambient_smooth"}
        if set(flags) - known:
            raise ScenarioError(lineno, f"unknown flags {sorted(set(flags) - known)}")
        decl = dc.TwoDivisorDeclaration(tuple(comps), **{f: True for f in flags})
        meta = {"dimx": int(m.group(2)) if m.group(2) else None}
        self.declare(Obj(m.group(1), "lemma43", decl, meta=meta), lineno)

    def do_resolution(self, lineno, rest):
        m = re.fullmatch(r"(\w+)\s*=\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)", rest)
        if not m:
            raise ScenarioError(lineno, "expected: resolution <name> = p,q,r")
        self.declare(Obj(m.group(1), "resolution", tuple(int(g) for g in m.group(2, 3, 4))), lineno)

    def do_expect(self, lineno, rest):
        if self.last is None:
            raise ScenarioError(lineno, "expect without a preceding declaration")
        self._inline(self.last, rest, lineno)


def parse_scenario(text: str) -> Scenario:
    r = _Reader()
    for lineno, line in _logical_lines(text):
        r.feed(lineno, line)
    return r.sc


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text())


# -- expectations ------------------------------------------------------------------------

_VERDICT = re.compile(r"(Tpqr|An)\(([\d,\s]+)\)|Unrecognized")


def _fmt(p: Polynomial) -> str:
    return p.format(DEGREVLEX)


def _basis_summary(gb, full: bool = True) -> dict:
    out = {"order": str(gb.order), "size": len(gb.elements)}
    if full:
        out["basis"] = [_fmt(p) for p in gb.elements]
    return out


def _other_generators(text: str, ring: Ring, reader: _Reader, lineno: int) -> tuple[list[Polynomial], str]:
    text = text.strip()
    if re.fullmatch(r"\w+", text) and text in reader.sc.objects:
        o = reader.sc.objects[text]
        if o.kind not in ("ideal", "system"):
            raise ScenarioError(lineno, f"{text!r} is not an ideal")
        return list(o.value.generators), text
    return parse_list(text, ring), "listed generators"


def _split_args(rest: str) -> tuple[str, str, str]:
    """``keyword [options] [: payload]``."""
    head, sep, payload = rest.partition(":")
    words = head.split(maxsplit=1)
    return words[0] if words else "", words[1].strip() if len(words) > 1 else "", payload.strip()


def _make_check(o: Obj, rest: str, lineno: int, reader: _Reader):
    kind = o.kind
    if kind in ("ideal", "system"):
        return _ideal_check(o, rest, lineno, reader)
    if kind == "poly":
        return _poly_check(o, rest, lineno)
    if kind == "local":
        return _local_check(o, rest, lineno)
    if kind == "derived":
        return _derived_check(o, rest, lineno, reader)
    if kind == "identity":
        return _identity_check(o, rest, lineno)
    if kind == "point":
        return _point_check(o, rest, lineno)
    if kind in ("complex", "lemma43"):
        return _complex_check(o, rest, lineno)
    if kind == "resolution":
        return _resolution_check(o, rest, lineno)
    raise ScenarioError(lineno, f"no expectations for {kind}")


def _pick_order(o: Obj, opts: str, lineno: int, settings: Settings) -> tuple[MonomialOrder, str]:
    declared = _order(opts.split()[0], lineno) if opts and opts.split()[0] in ORDERS else o.order
    if settings.order is not None and settings.order != declared:
        return settings.order, f"order overridden from {declared} to {settings.order}"
    return declared, ""


def _ideal_check(o: Obj, rest: str, lineno: int, reader: _Reader):
    key, opts, payload = _split_args(rest)
    ideal: Ideal = o.value
    ring = ideal.ring

    if key == "trivial":

        def check(st):
            order, note = _pick_order(o, opts, lineno, st)
            gb = groebner_basis(ideal, order)
            return ("pass" if gb.is_unit else "fail"), dict(_basis_summary(gb), note=note)

        return check, "trivial"

    if key == "origin-only":
        m = re.fullmatch(r"(?:vars\s+(\S+))?", opts)
        if not m:
            raise ScenarioError(lineno, "expected: origin-only [vars x,y]")
        variables = _names(m.group(1)) if m.group(1) else None

        def check(st):
            order, note = _pick_order(o, "", lineno, st)
            cert = vanishes_only_at_origin(ideal, st.power_bound, order, variables)
            status = {"certified": "pass", "refuted": "fail"}.get(cert.status, "unknown")
            return status, {"status": cert.status, "powers": cert.powers, "bound": cert.bound, "reason": cert.reason, "note": note}

        return check, "origin-only"

    if key == "gb-equals":
        order = _order(opts, lineno) if opts else o.order
        expected = parse_list(payload, ring)

        def check(st):
            note = ""
            if st.order is not None and st.order != order:
                note = f"reduced bases depend on the order; kept {order} despite override {st.order}"
            gb = groebner_basis(ideal, order)
            want = sorted((_fmt(p.monic(order)) for p in expected))
            got = sorted(_fmt(p) for p in gb.elements)
            return ("pass" if want == got else "fail"), dict(_basis_summary(gb), expected=want, note=note)

        return check, "gb-equals"

    if key == "same-ideal":
        words = opts.split()
        opt_order = next((w for w in words if w in ORDERS), "")
        ref = payload or next((w for w in words if w not in ORDERS), "")
        if not ref:
            raise ScenarioError(lineno, "same-ideal needs a generator list or an ideal name")
        other, what = _other_generators(ref, ring, reader, lineno)

        def check(st):
            order, note = _pick_order(o, opt_order, lineno, st)
            ok = same_ideal(list(ideal.generators), other, order)
            b1 = groebner_basis(ideal, order)
            b2 = groebner_basis(Ideal(ring, tuple(p for p in other if not p.is_zero)), order)
            cert = {"against": what, "order": str(order), "size": len(b1.elements), "other_size": len(b2.elements)}
            if not ok:
                missing = [_fmt(p) for p in other if not b1.contains(p)]
                extra = [_fmt(p) for p in ideal.generators if not b2.contains(p)]
                cert.update(other_not_in_ideal=missing, ideal_not_in_other=extra)
            cert["note"] = note
            return ("pass" if ok else "fail"), cert

        return check, "same-ideal" + ("" if what == "listed generators" else f"({what})")

    if key == "member":
        polys = parse_list(payload, ring)

        def check(st):
            order, note = _pick_order(o, opts, lineno, st)
            gb = groebner_basis(ideal, order)
            bad = [_fmt(p) for p in polys if not gb.contains(p)]
            return ("fail" if bad else "pass"), {"checked": len(polys), "not_members": bad, "note": note}

        return check, "member"

    if key == "quotient-dim":
        want = opts

        def check(st):
            order, note = _pick_order(o, "", lineno, st)
            d = quotient_dimension(ideal, order)
            return ("pass" if str(d) == want else "fail"), {"dimension": d, "note": note}

        return check, "quotient-dim"

    raise ScenarioError(lineno, f"unknown ideal expectation {key!r}")


def _poly_check(o: Obj, rest: str, lineno: int):
    key, opts, payload = _split_args(rest)
    f: Polynomial = o.value
    if key == "smooth":
        var = opts.split()[-1] if opts else None

        def check(st):
            reports = geo.hypersurface_smoothness(f, var, st.order or LEX, st.power_bound)
            ok = all(r.ok for r in reports)
            charts = [{"chart": f"{r.variable}={r.value}", "verdict": r.verdict, "detail": r.detail} for r in reports]
            return ("pass" if ok else "fail"), {"charts": charts}

        return check, "smooth"
    if key == "partials":
        m = re.fullmatch(r"(?:differ\s+(\S+))?", opts)
        if not m:
            raise ScenarioError(lineno, "expected: partials [differ x1,x2] : list")
        differ = set(_names(m.group(1))) if m.group(1) else set()
        shown = parse_list(payload, f.ring)
        rows = geo.compare_partials(f, shown)

        def check(st):
            mismatched = {v for v, ok, _ in rows if not ok}
            notes = [
                f"displayed d/d{v} is {_fmt(d)} but the derivative of {o.name} is {_fmt(true)}"
                for (v, ok, true), d in zip(rows, shown)
                if not ok
            ]
            return ("pass" if mismatched == differ else "fail"), {"mismatched": sorted(mismatched), "paper_notes": notes}

        return check, "partials"
    raise ScenarioError(lineno, f"unknown polynomial expectation {key!r}")


def _local_check(o: Obj, rest: str, lineno: int):
    f: Polynomial = o.value
    text = rest.strip()

    def series(st):
        n = st.trunc or o.meta["trunc"] or sg.default_order(f)
        return sg.TruncatedSeries(f, n)

    m = _VERDICT.fullmatch(text)
    if m:

        def check(st):
            s = series(st)
            v = sg.classify(s)
            cert = {"verdict": str(v), "steps": len(v.change_log), "truncation": s.order}
            if v.coefficient is not None:
                cert["coefficient"] = str(v.coefficient)
            if v.note:
                cert["note"] = v.note
            return ("pass" if str(v) == text.replace(" ", "") else "fail"), cert

        return check, text.replace(" ", "")
    key, opts, _ = _split_args(text)
    if key == "corank":

        def check(st):
            c = sg.hessian_corank(series(st))
            return ("pass" if c == int(opts) else "fail"), {"corank": c}

        return check, "corank"
    if key == "milnor":

        def check(st):
            mu = sg.milnor_number(f)
            return ("pass" if mu == int(opts) else "fail"), {"milnor": mu}

        return check, "milnor"
    raise ScenarioError(lineno, f"unknown local expectation {text!r}")


def _derived_check(o: Obj, rest: str, lineno: int, reader: _Reader):
    key, opts, payload = _split_args(rest)
    if key != "equals":
        raise ScenarioError(lineno, f"unknown derive expectation {key!r}")
    gens: list[Polynomial] = o.value
    ring = gens[0].ring if gens else None
    if payload:
        want = parse(payload, ring)
    else:
        ref = reader.obj(opts.split()[-1], lineno, "local")
        src = ref.value
        if set(src.ring.names) != set(ring.names):
            raise ScenarioError(lineno, f"{ref.name} lives in {src.ring}, derived ring is {ring}")
        want = substitute(src, {n: Polynomial.variable(ring, n) for n in src.ring.names}, ring)
    up_to_scalar = "up-to-scalar" in opts

    def check(st):
        found = None
        for g in gens:
            if up_to_scalar and g.terms and want.terms:
                e = next(iter(g.terms))
                c = want.coefficient(e) / g.coefficient(e) if g.coefficient(e) else 0
                ok = bool(c) and g * c == want
            else:
                ok = g == want
            if ok:
                found = g
                break
        return ("pass" if found is not None else "fail"), {
            "generators": [_fmt(g) for g in gens],
            "expected": _fmt(want),
        }

    return check, "equals"


def _identity_check(o: Obj, rest: str, lineno: int):
    if rest.strip() != "holds":
        raise ScenarioError(lineno, "identities support only 'expect holds'")
    lhs, rhs, rels = o.value

    def check(st):
        diff = lhs - rhs
        if rels:
            diff = groebner_basis(Ideal(lhs.ring, tuple(rels)), LEX).reduce(diff)
        return ("pass" if diff.is_zero else "fail"), {"residue": _fmt(diff)}

    return check, "holds"


def _point_check(o: Obj, rest: str, lineno: int):
    want = rest.strip()
    if want not in ("singular", "not-singular"):
        raise ScenarioError(lineno, "points support 'expect singular' or 'expect not-singular'")
    ideal, coords, rels = o.value

    def check(st):
        hit = geo.point_is_singular(list(ideal.generators), coords, rels)
        ok = hit == (want == "singular")
        return ("pass" if ok else "fail"), {"vanishes": hit}

    return check, want


def _complex_check(o: Obj, rest: str, lineno: int):
    key, opts, _ = _split_args(rest)

    def dim_of():
        if o.kind == "lemma43":
            return dc.lemma43_rule(o.value)
        return dc.dimension(o.value)

    if key == "dim":

        def check(st):
            d = dim_of()
            return ("pass" if d == int(opts) else "fail"), {"dimension": d}

        return check, "dim"
    if key in ("circle", "not-circle"):

        def check(st):
            c = dc.is_circle(o.value)
            return ("pass" if c == (key == "circle") else "fail"), {"circle": c}

        return check, key
    if key == "coreg":
        if o.meta.get("dimx") is None:
            raise ScenarioError(lineno, "coreg needs 'dimx N' on the declaration")

        def check(st):
            rec = dc.coregularity(o.meta["dimx"], dim_of())
            return ("pass" if rec.coreg == int(opts) else "fail"), {"dim_x": rec.dim_x, "reg": rec.reg, "coreg": rec.coreg}

        return check, "coreg"
    raise ScenarioError(lineno, f"unknown complex expectation {key!r}")


def _resolution_check(o: Obj, rest: str, lineno: int):
    key, opts, _ = _split_args(rest)
    if key == "cycle":
        want = tuple(int(w) for w in _names(opts))

        def check(st):
            g = dc.resolution_graph(*o.value)
            return ("pass" if g.weights == want else "fail"), {"weights": list(g.weights), "nodal": g.nodal}

        return check, "cycle"
    if key in ("nodal", "not-nodal"):

        def check(st):
            g = dc.resolution_graph(*o.value)
            return ("pass" if g.nodal == (key == "nodal") else "fail"), {"weights": list(g.weights), "nodal": g.nodal}

        return check, key
    raise ScenarioError(lineno, f"unknown resolution expectation {key!r}")


# -- running ----------------------------------------------------------------------------------


def _run_task(task: Task, settings: Settings) -> dict:
    t0 = time.perf_counter()
    try:
        status, cert = task.check(settings)
    except Exception as exc:  # a failing check must not stop the other tasks
        status, cert = "fail", {"error": f"{type(exc).__name__}: {exc}"}
    cert = {k: v for k, v in cert.items() if v not in ("", None)}
    return {
        "index": task.index,
        "name": task.name,
        "line": task.lineno,
        "status": status,
        "certificate": cert,
        "wall_time": round(time.perf_counter() - t0, 4),
    }


def run_scenario(sc: Scenario, settings: Settings | None = None) -> dict:
    """Run every task (none short-circuit) and assemble the report."""
    st = settings or Settings()
    tasks = sc.tasks
    if st.only:
        tasks = [t for t in tasks if t.obj == st.only or t.name == st.only or t.name.startswith(st.only + ":")]
    if st.threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(st.threads) as pool:
            results = list(pool.map(lambda t: _run_task(t, st), tasks))
    else:
        results = [_run_task(t, st) for t in tasks]
    results.sort(key=lambda r: r["index"])
    notes = list(sc.notes)
    for r in results:
        notes.extend(r["certificate"].pop("paper_notes", []))
    counts = {s: sum(1 for r in results if r["status"] == s) for s in ("pass", "fail", "unknown")}
    return {
        "scenario": sc.name,
        "status": "pass" if counts["fail"] == counts["unknown"] == 0 else "fail",
        "settings": {
            "order": str(st.order) if st.order else "declared",
            "trunc": st.trunc,
            "threads": st.threads,
            "power_bound": st.power_bound,
            "only": st.only,
        },
        "summary": counts,
        "tasks": results,
        "paper_notes": notes,
    }


def strip_times(report: dict) -> dict:
    """Copy of ``report`` without wall-time fields, for comparisons."""
    out = dict(report)
    out["tasks"] = [{k: v for k, v in t.items() if k != "wall_time"} for t in report["tasks"]]
    out["settings"] = {k: v for k, v in report["settings"].items() if k != "threads"}
    return out
