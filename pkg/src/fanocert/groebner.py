"""Buchberger's algorithm and ideal-theoretic predicates built on it.

Internally polynomials are kept as primitive integer dicts and reduced
fraction-free; only the final reduced basis is converted back to monic
rational :class:`~fanocert.poly.Polynomial` objects.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, lcm
from operator import add as _tadd, sub as _tsub
from typing import Iterable, Sequence

from .poly import (
    DEGREVLEX,
    LEX,
    Exponents,
    MonomialOrder,
    Polynomial,
    Ring,
    RingMismatch,
    divides,
    monomial_lcm,
    normal_form,
    s_polynomial,
)

log = logging.getLogger(__name__)

DEFAULT_POWER_BOUND = 32


@dataclass(frozen=True)
class Ideal:
    ring: Ring
    generators: tuple[Polynomial, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero)
        for g in gens:
            if g.ring != self.ring:
                raise RingMismatch(f"generator {g} is not in {self.ring}")
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, polys: Iterable[Polynomial], label: str | None = None, ring: Ring | None = None) -> Ideal:
        polys = tuple(polys)
        if ring is None:
            if not polys:
                raise ValueError("ring required for an ideal with no generators")
            ring = polys[0].ring
        return cls(ring, polys, label)

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic elements sorted by decreasing leading monomial."""

    ideal: Ideal
    order: MonomialOrder
    elements: tuple[Polynomial, ...]
    stats: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant

    def leading_monomials(self) -> list[Exponents]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.elements, self.order)

    def contains(self, p: Polynomial) -> bool:
        return self.reduce(p).is_zero

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)


# -- integer engine --------------------------------------------------------


class _Keys(dict):
    """Memoised order keys for exponent tuples."""

    def __init__(self, order: MonomialOrder):
        super().__init__()
        self.f = order.key

    def __missing__(self, e):
        k = self[e] = self.f(e)
        return k


def _to_int(p: Polynomial) -> dict[Exponents, int]:
    den = lcm(*(c.denominator for _, c in p.items()))
    return {e: int(c * den) for e, c in p.items()}


def _primitive(d: dict[Exponents, int], lm: Exponents) -> dict[Exponents, int]:
    g = gcd(*d.values())
    if d[lm] < 0:
        g = -g
    if g == 1:
        return d
    return {e: c // g for e, c in d.items()}


class _Elt:
    __slots__ = ("lm", "lc", "terms")

    def __init__(self, terms: dict[Exponents, int], lm: Exponents):
        self.terms = terms
        self.lm = lm
        self.lc = terms[lm]


def _reduce(p: dict, reducers: Sequence[_Elt], keys: _Keys) -> dict:
    """Fraction-free full reduction of ``p``; the result is a nonzero multiple of the remainder."""
    work = dict(p)
    rem: dict[Exponents, int] = {}
    kget = keys.__getitem__
    while work:
        m = max(work, key=kget)
        c = work[m]
        for g in reducers:
            lm = g.lm
            if all(x >= y for x, y in zip(m, lm)):
                break
        else:
            rem[m] = work.pop(m)
            continue
        q = tuple(map(_tsub, m, lm))
        d = gcd(c, g.lc)
        a, b = g.lc // d, c // d
        if a != 1:
            work = {e: a * v for e, v in work.items()}
            if rem:
                rem = {e: a * v for e, v in rem.items()}
        for e, v in g.terms.items():
            e2 = tuple(map(_tadd, e, q))
            nv = work.get(e2, 0) - b * v
            if nv:
                work[e2] = nv
            else:
                del work[e2]
        if len(work) > 64 and a != 1:
            g2 = gcd(*work.values(), *rem.values())
            if g2 > 1:
                work = {e: v // g2 for e, v in work.items()}
                rem = {e: v // g2 for e, v in rem.items()}
    return rem


def _spoly(f: _Elt, g: _Elt) -> dict:
    m = monomial_lcm(f.lm, g.lm)
    qf = tuple(map(_tsub, m, f.lm))
    qg = tuple(map(_tsub, m, g.lm))
    d = gcd(f.lc, g.lc)
    a, b = g.lc // d, f.lc // d
    out: dict[Exponents, int] = {}
    for e, v in f.terms.items():
        out[tuple(map(_tadd, e, qf))] = a * v
    for e, v in g.terms.items():
        e2 = tuple(map(_tadd, e, qg))
        nv = out.get(e2, 0) - b * v
        if nv:
            out[e2] = nv
        else:
            out.pop(e2, None)
    return out


def _coprime(a: Exponents, b: Exponents) -> bool:
    return not any(x and y for x, y in zip(a, b))


class _Engine:
    """Buchberger completion with Gebauer-Moeller pair pruning."""

    def __init__(self, order: MonomialOrder, workers: int = 1):
        self.order = order
        self.keys = _Keys(order)
        self.workers = max(1, workers)
        self.elts: list[_Elt] = []
        self.active: list[int] = []
        self.pairs: list[tuple[int, int]] = []
        self.stats = {"pairs_reduced": 0, "zero_reductions": 0, "pruned": 0}

    def lead(self, d: dict) -> Exponents:
        return max(d, key=self.keys.__getitem__)

    def reducers(self) -> list[_Elt]:
        return [self.elts[i] for i in self.active]

    def update(self, ih: int):
        elts = self.elts
        h = elts[ih]
        mh = h.lm
        cand = list(self.active)
        keep: list[int] = []
        # chain criterion among the new pairs, coprime pairs kept for now
        while cand:
            ig = cand.pop(0)
            mg = elts[ig].lm
            l_hg = monomial_lcm(mh, mg)
            if _coprime(mh, mg):
                keep.append(ig)
                continue
            redundant = any(divides(monomial_lcm(mh, elts[j].lm), l_hg) for j in cand) or any(
                divides(monomial_lcm(mh, elts[j].lm), l_hg) for j in keep
            )
            if redundant:
                self.stats["pruned"] += 1
            else:
                keep.append(ig)
        new_pairs = []
        for ig in keep:
            if _coprime(mh, elts[ig].lm):
                self.stats["pruned"] += 1
            else:
                new_pairs.append((ig, ih))
        old = []
        for i, j in self.pairs:
            l_ij = monomial_lcm(elts[i].lm, elts[j].lm)
            if (
                divides(mh, l_ij)
                and monomial_lcm(elts[i].lm, mh) != l_ij
                and monomial_lcm(elts[j].lm, mh) != l_ij
            ):
                self.stats["pruned"] += 1
            else:
                old.append((i, j))
        self.pairs = old + new_pairs
        self.active = [i for i in self.active if not divides(mh, elts[i].lm)] + [ih]

    def add(self, d: dict) -> bool:
        """Insert a reduced nonzero polynomial; return True if it is a unit."""
        lm = self.lead(d)
        d = _primitive(d, lm)
        self.elts.append(_Elt(d, lm))
        self.update(len(self.elts) - 1)
        return not any(lm)

    def pair_key(self, pair):
        # smallest lcm in the monomial order first; degree-first selection
        # stalls on the lex computations here
        i, j = pair
        m = monomial_lcm(self.elts[i].lm, self.elts[j].lm)
        return (self.keys[m], pair)

    def next_batch(self) -> list[tuple[int, int]]:
        self.pairs.sort(key=self.pair_key)
        k = self.workers
        batch, self.pairs = self.pairs[:k], self.pairs[k:]
        return batch

    def run(self, polys: Sequence[dict]) -> list[_Elt]:
        for d in polys:
            if not d:
                continue
            h = _reduce(d, self.reducers(), self.keys)
            if h and self.add(h):
                return [self.elts[-1]]
        pool = ThreadPoolExecutor(self.workers) if self.workers > 1 else None
        try:
            while self.pairs:
                batch = self.next_batch()
                snapshot = self.reducers()
                jobs = [(self.elts[i], self.elts[j]) for i, j in batch]

                def work(fg, snapshot=snapshot):
                    return _reduce(_spoly(*fg), snapshot, self.keys)

                results = list(pool.map(work, jobs)) if pool else [work(fg) for fg in jobs]
                for h in results:
                    self.stats["pairs_reduced"] += 1
                    if h and len(batch) > 1:
                        # basis may have grown since the snapshot
                        h = _reduce(h, self.reducers(), self.keys)
                    if not h:
                        self.stats["zero_reductions"] += 1
                        continue
                    if self.add(h):
                        return [self.elts[-1]]
        finally:
            if pool:
                pool.shutdown()
        return self.reducers()

    def interreduce(self, basis: list[_Elt]) -> list[dict]:
        # the basis is minimal, so full reduction by the others keeps each lead term
        return [_reduce(g.terms, [h for h in basis if h is not g], self.keys) for g in basis]


def _finish(dicts: list[dict], ring: Ring, order: MonomialOrder, keys: _Keys) -> list[Polynomial]:
    polys = []
    for d in dicts:
        lm = max(d, key=keys.__getitem__)
        lc = d[lm]
        polys.append(Polynomial._raw(ring, {e: Fraction(v, lc) for e, v in d.items()}))
    polys.sort(key=lambda p: keys[p.leading_monomial(order)], reverse=True)
    return polys


def buchberger(ideal: Ideal, order: MonomialOrder = LEX, workers: int = 1) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order``.

    With ``workers > 1`` batches of S-pairs are reduced concurrently; the
    reduced basis is unique, so the result does not depend on ``workers``.
    """
    eng = _Engine(order, workers)
    seeds = [_to_int(g) for g in ideal.generators]
    basis = eng.run(seeds)
    if len(basis) == 1 and not any(basis[0].lm):
        elements = [Polynomial.constant(ideal.ring, 1)]
    else:
        elements = _finish(eng.interreduce(basis), ideal.ring, order, eng.keys)
    stats = dict(eng.stats, basis_size=len(elements), max_degree=max((p.total_degree for p in elements), default=-1))
    return GroebnerBasis(ideal, order, tuple(elements), stats)


@lru_cache(maxsize=256)
def _cached(ideal: Ideal, order: MonomialOrder) -> GroebnerBasis:
    return buchberger(ideal, order)


def groebner_basis(ideal: Ideal, order: MonomialOrder = LEX) -> GroebnerBasis:
    """Memoised :func:`buchberger` (single worker)."""
    return _cached(ideal, order)


# -- predicates ----------------------------------------------------------------


def ideal_sum(ideal: Ideal, extra: Sequence[Polynomial], label: str | None = None) -> Ideal:
    for p in extra:
        if p.ring != ideal.ring:
            raise RingMismatch(f"{p} is not in {ideal.ring}")
    return Ideal(ideal.ring, ideal.generators + tuple(extra), label or ideal.label)


def is_trivial(ideal: Ideal, order: MonomialOrder = LEX) -> bool:
    """True iff the ideal is the whole ring (reduced basis is {1})."""
    return groebner_basis(ideal, order).is_unit


def member(p: Polynomial, ideal: Ideal, order: MonomialOrder = LEX) -> bool:
    if p.ring != ideal.ring:
        raise RingMismatch(f"{p} is not in {ideal.ring}")
    if p.is_zero:
        return True
    return groebner_basis(ideal, order).contains(p)


def same_ideal(g1: Sequence[Polynomial], g2: Sequence[Polynomial], order: MonomialOrder = LEX) -> bool:
    """True iff both generator lists span the same ideal."""
    g1, g2 = list(g1), list(g2)
    rings = {p.ring for p in g1 + g2}
    if len(rings) > 1:
        raise RingMismatch("generator lists live in different rings")
    if not rings:
        return True
    ring = rings.pop()
    b1 = groebner_basis(Ideal(ring, tuple(g1)), order)
    b2 = groebner_basis(Ideal(ring, tuple(g2)), order)
    return b1.elements == b2.elements


def _pure_power_bounds(gb: GroebnerBasis) -> list[int | None]:
    n = gb.ideal.ring.arity
    bounds: list[int | None] = [None] * n
    for lm in gb.leading_monomials():
        nz = [i for i, e in enumerate(lm) if e]
        if not nz:
            return [0] * n
        if len(nz) == 1:
            i = nz[0]
            if bounds[i] is None or lm[i] < bounds[i]:
                bounds[i] = lm[i]
    return bounds


def standard_monomials(gb: GroebnerBasis) -> list[Exponents] | None:
    """Monomials outside the leading-term ideal, or None if there are infinitely many."""
    bounds = _pure_power_bounds(gb)
    if any(b is None for b in bounds):
        return None
    if gb.is_unit:
        return []
    lms = gb.leading_monomials()
    n = len(bounds)
    out: list[Exponents] = []

    def walk(prefix: list[int], i: int):
        if i == n:
            out.append(tuple(prefix))
            return
        for k in range(bounds[i]):
            cand = prefix + [k] + [0] * (n - i - 1)
            # a prefix divisible by a leading monomial stays divisible for larger tails
            if any(divides(lm, cand) for lm in lms):
                break
            walk(prefix + [k], i + 1)

    walk([], 0)
    return out


def quotient_dimension(ideal: Ideal, order: MonomialOrder = DEGREVLEX) -> int | str:
    """dim_Q of Q[x]/I, or ``"infinite"``."""
    std = standard_monomials(groebner_basis(ideal, order))
    return "infinite" if std is None else len(std)


@dataclass(frozen=True)
class OriginCertificate:
    """Outcome of :func:`vanishes_only_at_origin`.

    ``status`` is ``"certified"``, ``"refuted"`` or ``"unknown"``; truthiness
    is True only when certified.  ``powers`` maps each variable to the least
    exponent found in the ideal.
    """

    status: str
    powers: dict[str, int]
    bound: int
    reason: str = ""

    def __bool__(self):
        return self.status == "certified"


def vanishes_only_at_origin(
    ideal: Ideal,
    power_bound: int = DEFAULT_POWER_BOUND,
    order: MonomialOrder = DEGREVLEX,
    variables: Sequence[str | int] | None = None,
) -> OriginCertificate:
    """Certify that every zero of I has the given coordinates equal to 0.

    The certificate is a pure power ``x_i^k`` in I for every listed variable
    (all variables by default).  Refutes when the quotient is finite of
    dimension at most the bound and some listed variable is not nilpotent,
    or when all variables are listed and the zero set is positive-dimensional.
    """
    if power_bound < 1:
        raise ValueError("power_bound must be at least 1")
    ring = ideal.ring
    idx = list(range(ring.arity)) if variables is None else [ring.index(v) for v in variables]
    gb = groebner_basis(ideal, order)
    if gb.is_unit:
        return OriginCertificate("certified", {ring.names[i]: 0 for i in idx}, power_bound, "ideal is trivial")
    powers: dict[str, int] = {}
    missing = []
    for i in idx:
        name = ring.names[i]
        x = Polynomial.variable(ring, i)
        r = Polynomial.constant(ring, 1)
        for k in range(1, power_bound + 1):
            r = gb.reduce(r * x)
            if r.is_zero:
                powers[name] = k
                break
        else:
            missing.append(name)
    if not missing:
        return OriginCertificate("certified", powers, power_bound)
    std = standard_monomials(gb)
    if std is None:
        if len(idx) == ring.arity:
            return OriginCertificate("refuted", powers, power_bound, "zero set is positive-dimensional")
    elif len(std) <= power_bound:
        return OriginCertificate(
            "refuted", powers, power_bound, f"{', '.join(missing)} not nilpotent in a quotient of dimension {len(std)}"
        )
    return OriginCertificate("unknown", powers, power_bound, f"no pure power of {', '.join(missing)} up to {power_bound}")


def is_groebner(elements: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Full Buchberger test: every S-polynomial reduces to zero (no criteria)."""
    elements = list(elements)
    for i, j in product(range(len(elements)), repeat=2):
        if i < j and not normal_form(s_polynomial(elements[i], elements[j], order), elements, order).is_zero:
            return False
    return True


def is_reduced(elements: Sequence[Polynomial], order: MonomialOrder) -> bool:
    lms = [g.leading_monomial(order) for g in elements]
    for i, g in enumerate(elements):
        if g.leading_coefficient(order) != 1:
            return False
        for e, _ in g.items():
            if any(divides(lm, e) for j, lm in enumerate(lms) if j != i):
                return False
    return True
