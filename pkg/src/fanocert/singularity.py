"""Local classification of isolated surface singularities at the origin.

Two recognisers are provided.  :func:`tpqr_classify` removes mixed monomials
from ``a*xyz + x^p + y^q + z^r + ...`` one at a time by substitutions of the
form ``x -> x - t*m`` until only the cross term and pure powers remain.
:func:`an_classify` handles corank one: it diagonalises the quadratic part
over Q, absorbs every higher term involving a non-degenerate direction by
completing squares, and reads the A_n type off the surviving power of the
kernel variable.  All work is on polynomials truncated at a fixed degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .poly import Exponents, Polynomial, Ring

DEFAULT_TRUNCATION = 16


class SmoothPoint(ValueError):
    """Raised when the series has a nonzero linear part."""


class NotApplicable(ValueError):
    """Raised when a recogniser's hypotheses fail."""


@dataclass(frozen=True)
class TruncatedSeries:
    """A polynomial modulo all monomials of total degree above ``order``."""

    poly: Polynomial
    order: int

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("truncation order must be at least 2")
        object.__setattr__(self, "poly", self.poly.truncate(self.order))

    @property
    def ring(self) -> Ring:
        return self.poly.ring

    def terms(self) -> dict[Exponents, Fraction]:
        return self.poly.terms

    def substitute(self, images: list[dict[Exponents, Fraction]]) -> TruncatedSeries:
        """Compose with a polynomial map given by one term dict per variable."""
        return TruncatedSeries(Polynomial._raw(self.ring, _compose(self.poly.terms, images, self.order)), self.order)

    def __eq__(self, other):
        return isinstance(other, TruncatedSeries) and self.order == other.order and self.poly == other.poly

    def __hash__(self):
        return hash((self.poly, self.order))

    def __str__(self):
        return f"{self.poly.format()} + O({self.order + 1})"


def series(poly: Polynomial, order: int | None = None) -> TruncatedSeries:
    return TruncatedSeries(poly, order or DEFAULT_TRUNCATION)


# -- truncated arithmetic on term dicts ---------------------------------------


def _mul(a: dict, b: dict, n: int) -> dict:
    out: dict[Exponents, Fraction] = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > n:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            v = out.get(e, 0) + ca * cb
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _compose(terms: dict, images: list[dict], n: int) -> dict:
    arity = len(images)
    one = {(0,) * arity: Fraction(1)}
    cache: list[dict[int, dict]] = [{0: one, 1: im} for im in images]

    def power(i, k):
        if k not in cache[i]:
            cache[i][k] = _mul(power(i, k - 1), images[i], n)
        return cache[i][k]

    acc: dict[Exponents, Fraction] = {}
    for e, c in terms.items():
        term = {(0,) * arity: c}
        for i, k in enumerate(e):
            if k:
                term = _mul(term, power(i, k), n)
                if not term:
                    break
        for te, tc in term.items():
            v = acc.get(te, 0) + tc
            if v:
                acc[te] = v
            else:
                acc.pop(te, None)
    return acc


def _unit_vector(arity: int, i: int) -> Exponents:
    return tuple(int(j == i) for j in range(arity))


def _identity_images(arity: int) -> list[dict]:
    return [{_unit_vector(arity, i): Fraction(1)} for i in range(arity)]


# -- verdicts ------------------------------------------------------------------


@dataclass(frozen=True)
class CoordinateChange:
    """The substitution ``x_target -> x_target - coeff * monomial``."""

    target_var: int
    coeff: Fraction
    monomial: Exponents

    def apply(self, s: TruncatedSeries) -> TruncatedSeries:
        """Substitute into ``s``; ``c*x^beta`` expands binomially in ``x_i``."""
        i, t, n = self.target_var, self.coeff, s.order
        step = tuple(x - (j == i) for j, x in enumerate(self.monomial))
        terms = s.poly.terms
        out = dict(terms)
        for beta, c in terms.items():
            for k in range(1, beta[i] + 1):
                e = tuple(b + k * d for b, d in zip(beta, step))
                if sum(e) > n:
                    break
                v = out.get(e, 0) + c * comb(beta[i], k) * (-t) ** k
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return TruncatedSeries(Polynomial._raw(s.ring, out), n)

    def images(self, arity: int) -> list[dict]:
        ims = _identity_images(arity)
        ims[self.target_var] = {_unit_vector(arity, self.target_var): Fraction(1), self.monomial: -self.coeff}
        return ims

    def describe(self, names: tuple[str, ...]) -> str:
        m = Polynomial.monomial(Ring(names), self.monomial, self.coeff)
        x = names[self.target_var]
        return f"{x} -> {x} - ({m.format()})"


@dataclass(frozen=True)
class SingularityVerdict:
    kind: str  # "Tpqr", "An" or "Unrecognized"
    params: tuple[int, ...] = ()
    coefficient: Fraction | None = None
    residual: TruncatedSeries | None = None
    change_log: tuple[CoordinateChange, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.kind == "Tpqr":
            p, q, r = self.params
            if Fraction(1, p) + Fraction(1, q) + Fraction(1, r) >= 1 or not self.coefficient:
                raise ValueError(f"not a cusp: {self.params}, a={self.coefficient}")
        elif self.kind == "An":
            if len(self.params) != 1 or self.params[0] < 1:
                raise ValueError(f"bad A_n index {self.params}")
        elif self.kind != "Unrecognized":
            raise ValueError(f"unknown verdict kind {self.kind!r}")

    def __str__(self):
        if self.kind == "Unrecognized":
            return "Unrecognized"
        return f"{self.kind}({','.join(map(str, self.params))})"


def _check_singular(s: TruncatedSeries):
    for e in s.poly.terms:
        d = sum(e)
        if d == 0:
            raise NotApplicable("series does not vanish at the origin")
        if d == 1:
            raise SmoothPoint("nonzero linear part: the origin is a smooth point")


# -- cusp recogniser -------------------------------------------------------------

_CROSS = (1, 1, 1)


def _is_mixed(e: Exponents) -> bool:
    return sum(1 for x in e if x) >= 2


def _off_form(e: Exponents) -> bool:
    return _is_mixed(e) and e != _CROSS


def elimination_target(alpha: Exponents) -> int:
    """Index of the variable to substitute when removing ``alpha``.

    The smallest index whose two companion exponents are both positive.
    """
    for i in range(3):
        if all(alpha[j] >= 1 for j in range(3) if j != i):
            return i
    raise NotApplicable(f"monomial {alpha} has fewer than two positive exponents")


def eliminate_monomial(s: TruncatedSeries, alpha: Exponents) -> tuple[TruncatedSeries, CoordinateChange]:
    """Remove the ``alpha`` term using the cross term ``a*xyz``.

    With ``i`` the target variable and ``j, k`` its companions, substitute
    ``x_i -> x_i - t * x^(alpha - e_j - e_k)`` where ``t = c_alpha / a``.  A
    term ``c * x^beta`` then contributes ``c * C(beta_i, k) * (-t)^k`` at
    ``beta + k*(alpha - e_j - e_k - e_i)`` for ``k = 1..beta_i``.
    """
    if s.ring.arity != 3:
        raise NotApplicable("the cusp recogniser works in three variables")
    alpha = tuple(alpha)
    terms = s.poly.terms
    c_alpha = terms.get(alpha)
    if not c_alpha:
        raise NotApplicable(f"monomial {alpha} is not present")
    if sum(alpha) < 4:
        raise NotApplicable(f"monomial {alpha} has degree below 4")
    i = elimination_target(alpha)
    a = terms.get(_CROSS)
    if not a:
        raise NotApplicable("the cross term xyz is missing")
    shift = tuple(alpha[m] - (m != i) for m in range(3))
    change = CoordinateChange(i, c_alpha / a, shift)
    return change.apply(s), change


def invert_change(change: CoordinateChange, order: int, arity: int = 3) -> list[dict]:
    """Truncated inverse of a single substitution, by fixed-point iteration."""
    i, t, m = change.target_var, change.coeff, change.monomial
    ident = _identity_images(arity)
    psi = [dict(d) for d in ident]
    # x_i' = x_i + t * m(x') ; each pass fixes at least one more degree
    for _ in range(order):
        mono = _compose({m: t}, psi, order)
        new = dict(ident[i])
        for e, c in mono.items():
            new[e] = new.get(e, 0) + c
        new = {e: c for e, c in new.items() if c}
        if new == psi[i]:
            break
        psi[i] = new
    return psi


def pure_powers(poly: Polynomial) -> list[int | None]:
    """Least exponent of each variable appearing as a pure power, if any."""
    out: list[int | None] = [None] * poly.ring.arity
    for e in poly.terms:
        nz = [i for i, x in enumerate(e) if x]
        if len(nz) == 1:
            i = nz[0]
            if out[i] is None or e[i] < out[i]:
                out[i] = e[i]
    return out


def default_order(poly: Polynomial) -> int:
    pp = pure_powers(poly)
    if len(pp) == 3 and all(pp):
        return max(4, sum(pp))
    return DEFAULT_TRUNCATION


def _cusp_inequality(p: int, q: int, r: int) -> bool:
    return Fraction(1, p) + Fraction(1, q) + Fraction(1, r) < 1


def tpqr_classify(s: TruncatedSeries, max_steps: int | None = None) -> SingularityVerdict:
    """Bring ``s`` to ``a*xyz + (units)*(x^p + y^q + z^r)`` and report T_{p,q,r}.

    Mixed monomials are removed lowest degree first, ties broken by the
    smallest exponent vector.  The returned triple is sorted.
    """
    if s.ring.arity != 3:
        raise NotApplicable("the cusp recogniser works in three variables")
    _check_singular(s)
    terms = s.poly.terms
    if not terms.get(_CROSS):
        raise NotApplicable("the cross term xyz is missing")
    low = [e for e in terms if _off_form(e) and sum(e) < 4]
    if low:
        raise NotApplicable(f"mixed terms of degree below 4: {sorted(low)}")
    pqr = pure_powers(s.poly)
    if not all(pqr):
        raise NotApplicable("some variable has no pure power below the truncation order")
    if not _cusp_inequality(*pqr):
        raise NotApplicable(f"1/p + 1/q + 1/r >= 1 for {tuple(pqr)}")
    bound = max_steps if max_steps is not None else comb(s.order + 3, 3)
    log: list[CoordinateChange] = []
    cur = s
    while True:
        off = [e for e in cur.poly.terms if _off_form(e)]
        if not off:
            break
        if len(log) >= bound:
            return SingularityVerdict("Unrecognized", residual=cur, change_log=tuple(log), note="step bound reached")
        alpha = min(off, key=lambda e: (sum(e), e))
        cur, ch = eliminate_monomial(cur, alpha)
        log.append(ch)
    a = cur.poly.terms[_CROSS]
    return SingularityVerdict("Tpqr", tuple(sorted(pqr)), a, cur, tuple(log))


# -- quadratic part ------------------------------------------------------------------


def quadratic_matrix(s: TruncatedSeries) -> list[list[Fraction]]:
    n = s.ring.arity
    q = [[Fraction(0)] * n for _ in range(n)]
    for e, c in s.poly.terms.items():
        if sum(e) != 2:
            continue
        idx = [i for i, x in enumerate(e) for _ in range(x)]
        i, j = idx
        if i == j:
            q[i][i] += c
        else:
            q[i][j] += c / 2
            q[j][i] += c / 2
    return q


def _bareiss_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[r][c] * m[rank][col] - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = m[rank][col]
        rank += 1
    return rank


def hessian_corank(s: TruncatedSeries) -> int:
    """Dimension of the kernel of the quadratic part."""
    _check_singular(s)
    q = quadratic_matrix(s)
    den = 1
    for row in q:
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
    rows = [[int(x * den) for x in row] for row in q]
    return s.ring.arity - _bareiss_rank(rows)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def diagonalize(q: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Rational congruence diagonalisation.

    Returns ``(T, d)`` with ``T^t Q T = diag(d)`` and the zero entries of
    ``d`` last; the old coordinates are ``x = T y``.
    """
    n = len(q)
    q = [list(r) for r in q]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(a, b):
        for row in t:
            row[a], row[b] = row[b], row[a]
        q[a], q[b] = q[b], q[a]
        for row in q:
            row[a], row[b] = row[b], row[a]

    def add_col(dst, src, f):
        # new basis vector e_dst + f*e_src
        for row in t:
            row[dst] += f * row[src]
        for c in range(n):
            q[dst][c] += f * q[src][c]
        for r in range(n):
            q[r][dst] += f * q[r][src]

    for k in range(n):
        piv = next((i for i in range(k, n) if q[i][i]), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if q[i][j]), None)
            if pair is None:
                break
            i, j = pair
            add_col(i, j, Fraction(1))
            piv = i
        if piv != k:
            swap(piv, k)
        for j in range(k + 1, n):
            if q[k][j]:
                add_col(j, k, -q[k][j] / q[k][k])
    return t, [q[i][i] for i in range(n)]


def _linear_images(t: list[list[Fraction]]) -> list[dict]:
    n = len(t)
    return [{_unit_vector(n, j): t[i][j] for j in range(n) if t[i][j]} for i in range(n)]


# -- A_n recogniser -----------------------------------------------------------------


def an_classify(s: TruncatedSeries, max_steps: int | None = None) -> SingularityVerdict:
    """Classify a corank <= 1 singularity as A_n.

    After a rational linear change the quadratic part is ``d_1 u^2 + d_2 v^2``
    (kernel variable ``z`` last).  Each higher term divisible by ``u`` (or
    ``v``) is absorbed by ``u -> u - c/(2 d_1) * (term/u)``, which only creates
    terms of larger degree.  What remains is ``d_1 u^2 + d_2 v^2 + c z^k + ...``
    and the point is A_{k-1}.
    """
    _check_singular(s)
    corank = hessian_corank(s)
    n = s.ring.arity
    if corank == 0:
        return SingularityVerdict("An", (1,), note="nondegenerate quadratic part")
    if corank >= 2:
        raise NotApplicable(f"corank {corank} is outside the A_n recogniser")
    t, d = diagonalize(quadratic_matrix(s))
    cur = s.substitute(_linear_images(t))
    live = [i for i in range(n) if d[i]]
    kernel = [i for i in range(n) if not d[i]]
    (z,) = kernel
    squares = {tuple(2 * int(j == i) for j in range(n)) for i in live}
    bound = max_steps if max_steps is not None else comb(s.order + n, n)
    log: list[CoordinateChange] = []
    while True:
        absorbable = [e for e in cur.poly.terms if e not in squares and any(e[i] for i in live)]
        if not absorbable:
            break
        zs = [sum(e) for e in cur.poly.terms if e[z] == sum(e)]
        if zs and min(zs) < min(map(sum, absorbable)):
            # every remaining term lies above the Newton diagram of
            # u^2 + v^2 + z^k, so it cannot change the type
            break
        if len(log) >= bound:
            return SingularityVerdict("Unrecognized", residual=cur, change_log=tuple(log), note="step bound reached")
        e = min(absorbable, key=lambda e: (sum(e), e))
        if sum(e) < 3:
            raise AssertionError(f"quadratic cross term {e} survived diagonalisation")
        i = next(i for i in live if e[i])
        c = cur.poly.terms[e]
        m = tuple(x - (j == i) for j, x in enumerate(e))
        ch = CoordinateChange(i, c / (2 * d[i]), m)
        cur = ch.apply(cur)
        log.append(ch)
    zpowers = [e[z] for e in cur.poly.terms if e[z] == sum(e)]
    if not zpowers:
        return SingularityVerdict(
            "Unrecognized",
            residual=cur,
            change_log=tuple(log),
            note=f"no power of the kernel variable up to degree {s.order}: A_n with n >= {s.order} or non-isolated",
        )
    k = min(zpowers)
    return SingularityVerdict("An", (k - 1,), cur.poly.terms[_unit_power(n, z, k)], cur, tuple(log))


def _unit_power(n: int, i: int, k: int) -> Exponents:
    return tuple(k if j == i else 0 for j in range(n))


def classify(s: TruncatedSeries) -> SingularityVerdict:
    """Dispatch on the corank of the quadratic part."""
    _check_singular(s)
    corank = hessian_corank(s)
    if corank <= 1:
        return an_classify(s)
    if s.ring.arity == 3:
        try:
            return tpqr_classify(s)
        except NotApplicable as exc:
            return SingularityVerdict("Unrecognized", residual=s, note=str(exc))
    return SingularityVerdict("Unrecognized", residual=s, note=f"corank {corank}")


# -- independent checks ------------------------------------------------------------------


def milnor_number(poly: Polynomial, max_power: int = 24) -> int | None:
    """dim Q[[x]]/(grad f), via the stabilising dimensions of Q[x]/(J + m^k).

    Returns None when the sequence has not stabilised by ``max_power``.
    """
    from .groebner import Ideal, quotient_dimension

    ring = poly.ring
    grads = [poly.diff(i) for i in range(ring.arity)]
    prev = None
    for k in range(2, max_power + 1):
        mono = _monomials_of_degree(ring.arity, k)
        gens = grads + [Polynomial.monomial(ring, e) for e in mono]
        dim = quotient_dimension(Ideal.of(gens))
        if dim == prev:
            return dim
        prev = dim
    return None


def _monomials_of_degree(n: int, k: int) -> list[Exponents]:
    if n == 1:
        return [(k,)]
    return [(i,) + rest for i in range(k + 1) for rest in _monomials_of_degree(n - 1, k - i)]
