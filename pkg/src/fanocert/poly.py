"""Exact multivariate polynomials over the rationals.

Polynomials are immutable mappings from exponent tuples to ``Fraction``
coefficients.  A :class:`MonomialOrder` is only consulted when an operation
needs one (leading terms, division, printing), so the same polynomial can be
viewed under lex, grlex or degrevlex without conversion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from operator import add as _tadd, sub as _tsub
from typing import Callable, Iterable, Mapping, Sequence

Exponents = tuple[int, ...]


class RingMismatch(ValueError):
    pass


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Ring:
    """Polynomial ring Q[x_0, ..., x_{n-1}] with optional positive weights."""

    names: tuple[str, ...]
    weights: tuple[int, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        weights = tuple(self.weights) or (1,) * len(names)
        if len(set(names)) != len(names) or any(not n for n in names):
            raise ValueError(f"variable names must be unique and nonempty: {names}")
        if len(weights) != len(names):
            raise ValueError("one weight per variable is required")
        if any(w < 1 for w in weights):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_names(cls, spec: str | Iterable[str], weights: Iterable[int] = ()) -> Ring:
        if isinstance(spec, str):
            spec = [s.strip() for s in spec.split(",")]
        return cls(tuple(spec), tuple(weights))

    @property
    def arity(self) -> int:
        return len(self.names)

    def index(self, name: str | int) -> int:
        if isinstance(name, int):
            if not 0 <= name < self.arity:
                raise ValueError(f"variable index {name} out of range")
            return name
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"unknown variable {name!r} (ring has {', '.join(self.names)})") from None

    def extend(self, names: Iterable[str], weights: Iterable[int] = ()) -> Ring:
        names = tuple(names)
        weights = tuple(weights) or (1,) * len(names)
        return Ring(self.names + names, self.weights + weights)

    def __str__(self):
        return "Q[" + ",".join(self.names) + "]"


def degree(exps: Exponents) -> int:
    return sum(exps)


def weighted_degree(exps: Exponents, weights: Sequence[int]) -> int:
    return sum(w * e for w, e in zip(weights, exps))


def divides(a: Exponents, b: Exponents) -> bool:
    """True iff the monomial with exponents ``a`` divides the one with ``b``."""
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(map(max, a, b))


@dataclass(frozen=True)
class MonomialOrder:
    """lex, grlex or degrevlex, optionally after permuting the variables.

    ``permutation`` lists ring indices from most to least significant; the
    default is declaration order (x_0 > x_1 > ...).
    """

    kind: str = "lex"
    permutation: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grlex", "degrevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.permutation is not None:
            perm = tuple(self.permutation)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"not a permutation: {perm}")
            object.__setattr__(self, "permutation", perm)

    @cached_property
    def key(self) -> Callable[[Exponents], tuple]:
        """Sort key: ``key(a) > key(b)`` iff monomial a is larger."""
        perm = self.permutation
        if self.kind == "lex":
            if perm is None:
                return lambda e: e
            return lambda e: tuple(e[i] for i in perm)
        if self.kind == "grlex":
            if perm is None:
                return lambda e: (sum(e), e)
            return lambda e: (sum(e), tuple(e[i] for i in perm))
        rperm = None if perm is None else tuple(reversed(perm))
        if rperm is None:
            return lambda e: (sum(e), tuple(-x for x in reversed(e)))
        return lambda e: (sum(e), tuple(-e[i] for i in rperm))

    def compare(self, a: Exponents, b: Exponents) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self):
        return self.kind if self.permutation is None else f"{self.kind}{list(self.permutation)}"


LEX = MonomialOrder("lex")
GRLEX = MonomialOrder("grlex")
DEGREVLEX = MonomialOrder("degrevlex")

ORDERS = {"lex": LEX, "grlex": GRLEX, "degrevlex": DEGREVLEX, "grevlex": DEGREVLEX}


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Polynomial:
    """An element of ``ring`` in canonical form (no zero coefficients)."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: Mapping[Exponents, object] | None = None):
        self.ring = ring
        clean: dict[Exponents, Fraction] = {}
        n = ring.arity
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {ring}")
            c = _coerce(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ring: Ring, terms: dict[Exponents, Fraction]) -> Polynomial:
        # caller guarantees canonical form
        p = object.__new__(cls)
        p.ring = ring
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring) -> Polynomial:
        return cls._raw(ring, {})

    @classmethod
    def constant(cls, ring: Ring, c) -> Polynomial:
        c = _coerce(c)
        return cls._raw(ring, {(0,) * ring.arity: c} if c else {})

    @classmethod
    def variable(cls, ring: Ring, name: str | int) -> Polynomial:
        i = ring.index(name)
        e = [0] * ring.arity
        e[i] = 1
        return cls._raw(ring, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, ring: Ring, exps: Exponents, coeff=1) -> Polynomial:
        return cls(ring, {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------
    @property
    def terms(self) -> dict[Exponents, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def coefficient(self, exps: Exponents) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[Fraction, Exponents]]:
        """(coefficient, exponents) pairs, strictly decreasing in ``order``."""
        key = order.key
        return [(self._terms[e], e) for e in sorted(self._terms, key=key, reverse=True)]

    def leading_monomial(self, order: MonomialOrder) -> Exponents:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self._terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Fraction:
        return self._terms[self.leading_monomial(order)]

    def monic(self, order: MonomialOrder) -> Polynomial:
        if not self._terms:
            return self
        return self * (1 / self.leading_coefficient(order))

    def variables(self) -> set[int]:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: Polynomial):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.ring, other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial.zero(self.ring)
            return Polynomial._raw(self.ring, {e: c * other for e, c in self._terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(map(_tadd, e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Polynomial) and other.is_constant and other:
            return self * (1 / other.coefficient((0,) * self.ring.arity))
        raise ValueError("polynomials can only be divided by nonzero constants")

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.ring, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def mul_term(self, exps: Exponents, coeff) -> Polynomial:
        coeff = _coerce(coeff)
        if not coeff:
            return Polynomial.zero(self.ring)
        return Polynomial._raw(
            self.ring, {tuple(map(_tadd, e, exps)): c * coeff for e, c in self._terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(self.ring, other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and substitution -------------------------------------------
    def diff(self, var: str | int) -> Polynomial:
        i = self.ring.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Polynomial._raw(self.ring, out)

    def subs(self, mapping: Mapping, target: Ring | None = None) -> Polynomial:
        return substitute(self, mapping, target)

    def evaluate(self, point: Sequence) -> Fraction:
        """Value at a rational point (one coordinate per variable)."""
        if len(point) != self.ring.arity:
            raise ValueError("point has wrong dimension")
        pt = [_coerce(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v *= x**k
            total += v
        return total

    def truncate(self, max_degree: int) -> Polynomial:
        return Polynomial._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) <= max_degree})

    def homogeneous_part(self, d: int) -> Polynomial:
        return Polynomial._raw(self.ring, {e: c for e, c in self._terms.items() if sum(e) == d})

    # -- printing -------------------------------------------------------------
    def format(self, order: MonomialOrder = DEGREVLEX) -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, e in self.sorted_terms(order):
            factors = []
            for name, k in zip(self.ring.names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r}, {','.join(self.ring.names)})"


# -- module-level operations ------------------------------------------------


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def partial_derivative(p: Polynomial, var: str | int) -> Polynomial:
    return p.diff(var)


def substitute(p: Polynomial, mapping: Mapping, target: Ring | None = None) -> Polynomial:
    """Image of ``p`` under the ring map sending each key variable to its value.

    Values may be polynomials in ``target`` (default ``p.ring``) or rational
    constants.  Variables not mentioned map to the same-named variable of the
    target ring.
    """
    target = target or p.ring
    images: list[Polynomial] = []
    given = {p.ring.index(k): v for k, v in mapping.items()}
    for i, name in enumerate(p.ring.names):
        v = given.get(i)
        if v is None:
            if name not in target.names:
                raise ValueError(f"variable {name!r} has no image in {target}")
            images.append(Polynomial.variable(target, name))
        elif isinstance(v, Polynomial):
            if v.ring != target:
                raise RingMismatch(f"image of {name} lives in {v.ring}, expected {target}")
            images.append(v)
        else:
            images.append(Polynomial.constant(target, v))
    return _apply_images(p, images, target)


def _apply_images(p: Polynomial, images: Sequence[Polynomial], target: Ring) -> Polynomial:
    powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1), 1: im} for im in images]

    def power(i: int, k: int) -> Polynomial:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * images[i]
        return cache[k]

    acc: dict[Exponents, Fraction] = {}
    for e, c in p.items():
        term = Polynomial.constant(target, c)
        for i, k in enumerate(e):
            if k:
                term = term * power(i, k)
        for te, tc in term.items():
            v = acc.get(te, 0) + tc
            if v:
                acc[te] = v
            else:
                acc.pop(te, None)
    return Polynomial._raw(target, acc)


def weighted_degree_check(p: Polynomial, d: int) -> bool:
    """True iff every term of ``p`` has weighted degree ``d`` (vacuous for 0)."""
    w = p.ring.weights
    return all(weighted_degree(e, w) == d for e in p._terms)


def is_homogeneous(p: Polynomial) -> bool:
    degs = {weighted_degree(e, p.ring.weights) for e in p._terms}
    return len(degs) <= 1


def normal_form(p: Polynomial, divisors: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of multivariate division of ``p`` by ``divisors``.

    The largest remaining term is always treated next; it is reduced by the
    first divisor (in list order) whose leading monomial divides it, otherwise
    moved to the remainder.
    """
    for g in divisors:
        p._check(g)
        if g.is_zero:
            raise ValueError("divisors must be nonzero")
    key = order.key
    leads = []
    for g in divisors:
        lm = g.leading_monomial(order)
        leads.append((lm, g._terms[lm], g._terms))
    work = dict(p._terms)
    rem: dict[Exponents, Fraction] = {}
    while work:
        m = max(work, key=key)
        c = work[m]
        for lm, lc, gt in leads:
            if divides(lm, m):
                q = tuple(map(_tsub, m, lm))
                f = c / lc
                for e, v in gt.items():
                    e2 = tuple(map(_tadd, e, q))
                    nv = work.get(e2, 0) - f * v
                    if nv:
                        work[e2] = nv
                    else:
                        work.pop(e2, None)
                break
        else:
            rem[m] = work.pop(m)
    return Polynomial._raw(p.ring, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    if f.is_zero or g.is_zero:
        raise ValueError("S-polynomial of a zero polynomial is undefined")
    f._check(g)
    lf, lg = f.leading_monomial(order), g.leading_monomial(order)
    m = monomial_lcm(lf, lg)
    return f.mul_term(tuple(map(_tsub, m, lf)), 1 / f._terms[lf]) - g.mul_term(
        tuple(map(_tsub, m, lg)), 1 / g._terms[lg]
    )


def clear_denominators(p: Polynomial) -> Polynomial:
    """Primitive integer multiple of ``p`` with positive leading coefficient in degrevlex."""
    if p.is_zero:
        return p
    den = lcm(*(c.denominator for c in p._terms.values()))
    nums = [int(c * den) for c in p._terms.values()]
    g = gcd(*nums)
    if p.leading_coefficient(DEGREVLEX) < 0:
        g = -g
    return p * Fraction(den, g)


# -- parsing --------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_GREEK = re.compile(r"\\\[([A-Za-z]+)\](\d*)")


def _tokenize(text: str) -> list[tuple[str, str]]:
    # Mathematica's \[Lambda] style names become plain lower-case identifiers
    text = _GREEK.sub(lambda m: f" {m.group(1).lower()}{m.group(2)} ", text)
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, ident, op = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif ident is not None:
            tokens.append(("id", ident))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r} in {text!r}")
            tokens.append(("op", op))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, ring: Ring):
        self.text = text
        self.ring = ring
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, value):
        kind, v = self.take()
        if v != value:
            raise ParseError(f"expected {value!r} in {self.text!r}")

    def parse(self) -> Polynomial:
        if not self.tokens:
            raise ParseError("empty polynomial")
        p = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input {self.peek()[1]!r} in {self.text!r}")
        return p

    def expr(self) -> Polynomial:
        kind, v = self.peek()
        sign = 1
        if v in ("+", "-"):
            self.take()
            sign = -1 if v == "-" else 1
        acc = self.term() * sign
        while True:
            kind, v = self.peek()
            if v not in ("+", "-"):
                return acc
            self.take()
            t = self.term()
            acc = acc + t if v == "+" else acc - t

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, v = self.peek()
            if v == "*":
                self.take()
                acc = acc * self.factor()
            elif v == "/":
                self.take()
                d = self.factor()
                if not d.is_constant or d.is_zero:
                    raise ParseError(f"division by non-constant in {self.text!r}")
                acc = acc / d
            elif kind in ("num", "id") or v == "(":
                acc = acc * self.factor()  # implicit multiplication, e.g. 2x0
            else:
                return acc

    def factor(self) -> Polynomial:
        kind, v = self.peek()
        if v == "-":
            self.take()
            return -self.factor()
        base = self.atom()
        kind, v = self.peek()
        if v == "^":
            self.take()
            kind, v = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a non-negative integer in {self.text!r}")
            base = base ** int(v)
        return base

    def atom(self) -> Polynomial:
        kind, v = self.take()
        if kind == "num":
            return Polynomial.constant(self.ring, int(v))
        if kind == "id":
            try:
                return Polynomial.variable(self.ring, v)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        if v == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {v!r} in {self.text!r}")


def parse(text: str, ring: Ring) -> Polynomial:
    """Parse ``2*x0*x1^2 - 3x2 + (x0+1)^2``-style text into ``ring``."""
    return _Parser(text, ring).parse()


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses, dropping empty pieces."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_list(text: str, ring: Ring) -> list[Polynomial]:
    """Comma-separated polynomials, optionally wrapped in ``{...}``."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    return [parse(s, ring) for s in split_top_level(text)]
