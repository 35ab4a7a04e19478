"""Dual complexes of boundary divisors, coregularity, and cusp resolution cycles.

A dual complex is assembled from a declaration of which boundary components
meet and in how many irreducible pieces.  Every piece of a ``k+1``-fold
intersection becomes a ``k``-cell glued to the cells of the sub-intersections
containing it.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class DeclarationError(ValueError):
    pass


@dataclass(frozen=True)
class Cell:
    ident: str
    vertices: frozenset[str]
    faces: tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class DualComplex:
    vertices: tuple[str, ...]
    cells: tuple[Cell, ...] = ()
    name: str = ""

    def cells_of_dim(self, k: int) -> list[Cell]:
        return [c for c in self.cells if c.dim == k]

    def multiplicity(self, subset: Iterable[str]) -> int:
        s = frozenset(subset)
        return sum(1 for c in self.cells if c.vertices == s)


def build_complex(
    vertices: Sequence[str],
    cells: Mapping[frozenset[str] | tuple[str, ...], int] | Sequence[tuple[Iterable[str], int]] = (),
    attachments: Mapping[str, Sequence[str]] | None = None,
    name: str = "",
) -> DualComplex:
    """Assemble CW data from a strata declaration.

    ``cells`` gives, for each set of at least two vertices, the number of
    irreducible components of that intersection.  Cells over a set ``S`` are
    named ``"a,b,c#i"``; a cell is glued to the unique cell over each
    ``S - {v}`` unless that set carries several cells, in which case
    ``attachments`` must name the faces explicitly.
    """
    verts = tuple(vertices)
    if len(set(verts)) != len(verts):
        raise DeclarationError("duplicate vertex labels")
    items = list(cells.items()) if isinstance(cells, Mapping) else list(cells)
    attachments = dict(attachments or {})
    out: list[Cell] = [Cell(v, frozenset([v])) for v in verts]
    by_set: dict[frozenset[str], list[str]] = {frozenset([v]): [v] for v in verts}
    decl: dict[frozenset[str], int] = {}
    for subset, mult in items:
        s = frozenset(subset)
        if len(s) < 2:
            raise DeclarationError(f"cells need at least two vertices: {sorted(s)}")
        if not s <= set(verts):
            raise DeclarationError(f"unknown vertices in {sorted(s - set(verts))}")
        if mult < 0:
            raise DeclarationError("multiplicities must be nonnegative")
        decl[s] = decl.get(s, 0) + mult
    for s in sorted(decl, key=lambda s: (len(s), sorted(s))):
        mult = decl[s]
        if not mult:
            continue
        label = ",".join(v for v in verts if v in s)
        for i in range(1, mult + 1):
            ident = f"{label}#{i}"
            faces = []
            for v in verts:
                if v not in s:
                    continue
                face = s - {v}
                below = by_set.get(face, [])
                if not below:
                    raise DeclarationError(f"{ident} has no cell over its face {sorted(face)}")
                if len(below) == 1:
                    faces.append(below[0])
                    continue
                chosen = [f for f in attachments.get(ident, ()) if f in below]
                if len(chosen) != 1:
                    raise DeclarationError(f"{ident}: face {sorted(face)} carries {len(below)} cells; name one")
                faces.append(chosen[0])
            out.append(Cell(ident, s, tuple(faces)))
            by_set.setdefault(s, []).append(ident)
    return DualComplex(verts, tuple(out), name)


def dimension(c: DualComplex) -> int:
    return max((cell.dim for cell in c.cells), default=-1)


def is_circle(c: DualComplex) -> bool:
    """One-dimensional, connected, every vertex on exactly two edges."""
    if dimension(c) != 1 or not c.vertices:
        return False
    edges = c.cells_of_dim(1)
    degree = Counter(v for e in edges for v in e.vertices)
    if any(degree[v] != 2 for v in c.vertices):
        return False
    seen = {c.vertices[0]}
    stack = [c.vertices[0]]
    while stack:
        v = stack.pop()
        for e in edges:
            if v in e.vertices:
                for w in e.vertices - seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == len(c.vertices)


@dataclass(frozen=True)
class CoregularityRecord:
    dim_x: int
    reg: int
    coreg: int

    def __post_init__(self):
        if self.coreg != self.dim_x - self.reg - 1:
            raise ValueError("coreg must equal dim_x - reg - 1")
        if not -1 <= self.reg <= self.dim_x - 1:
            raise ValueError(f"regularity {self.reg} out of range for dimension {self.dim_x}")


def coregularity(dim_x: int, c: DualComplex | int) -> CoregularityRecord:
    """Coregularity from the dual complex (or directly from its dimension)."""
    reg = c if isinstance(c, int) else dimension(c)
    if reg > dim_x - 1:
        raise ValueError(f"a boundary on a {dim_x}-fold has dual complex of dimension at most {dim_x - 1}")
    return CoregularityRecord(dim_x, reg, dim_x - reg - 1)


@dataclass(frozen=True)
class TwoDivisorDeclaration:
    """Asserted facts about two surfaces ``D1 + D2`` in a smooth threefold."""

    components: tuple[str, str]
    du_val: bool = False
    nodal_genus_one_intersection: bool = False
    intersection_in_smooth_locus: bool = False
    ambient_smooth: bool = False


def lemma43_rule(decl: TwoDivisorDeclaration) -> int:
    """Two du Val surfaces meeting in a nodal arithmetic genus one curve give dimension 2.

    Only the declared flags are checked; the geometry itself is asserted.
    """
    missing = [
        name
        for name in ("ambient_smooth", "du_val", "nodal_genus_one_intersection", "intersection_in_smooth_locus")
        if not getattr(decl, name)
    ]
    if missing:
        raise DeclarationError(f"rule needs the flags: {', '.join(missing)}")
    if len(set(decl.components)) != 2:
        raise DeclarationError("rule needs two distinct components")
    return 2


# -- cusp resolution cycles ----------------------------------------------------------------


@dataclass(frozen=True)
class ResolutionGraph:
    """Cyclic chain of exceptional curves, listed by self-intersection weight.

    A single vertex stands for one nodal rational curve; its weight is the
    cycle-convention value, the curve's self-intersection being weight + 2.
    """

    weights: tuple[int, ...]
    nodal: bool = field(init=False)

    def __post_init__(self):
        if not self.weights:
            raise ValueError("empty cycle")
        if any(w > -2 for w in self.weights):
            raise ValueError("weights must be at most -2")
        if not any(w <= -3 for w in self.weights):
            raise ValueError("a cusp cycle has a curve of weight at most -3")
        object.__setattr__(self, "nodal", len(self.weights) == 1)

    def __len__(self):
        return len(self.weights)


def cusp_condition(p: int, q: int, r: int) -> bool:
    return Fraction(1, p) + Fraction(1, q) + Fraction(1, r) < 1


def resolution_graph(p: int, q: int, r: int) -> ResolutionGraph:
    """Minimal resolution cycle of T_{p,q,r}; the triple is sorted first.

    Each arc label counts all (-2)-curves on that arc.
    """
    p, q, r = sorted((p, q, r))
    if p < 2 or not cusp_condition(p, q, r):
        raise ValueError(f"T_{{{p},{q},{r}}} is not a cusp: need 1/p + 1/q + 1/r < 1")

    def chain(k):
        return [-2] * k

    if p == 2 and q == 3:
        w = [-3] + chain(r - 7)
    elif p == 2 and q == 4:
        w = [-4] + chain(r - 5)
    elif p == 3 and q == 3:
        w = [-5] + chain(r - 4)
    elif p == 2:
        w = [-3] + chain(q - 5) + [-3] + chain(r - 5)
    elif p == 3:
        w = [-4] + chain(q - 4) + [-3] + chain(r - 4)
    else:
        w = [-3] + chain(p - 4) + [-3] + chain(q - 4) + [-3] + chain(r - 4)
    return ResolutionGraph(tuple(w))
