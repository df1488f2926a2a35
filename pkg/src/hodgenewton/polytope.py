"""Exact convex lattice polytopes: hulls, facets, denominators, the weight function, volumes."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

from . import lp
from .errors import InvalidPolytopeError, UnsupportedDimensionError
from .linalg import affine_dimension, det_int, hyperplane_normal, primitive, rank

INFINITY = math.inf
SUPPORTED_DIMENSIONS = (1, 2, 3, 4)

Point = tuple[int, ...]


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


@dataclass(frozen=True)
class Facet:
    """Supporting hyperplane ``a.X <= b`` (``a`` primitive integral) and its incident vertices."""

    vertex_indices: tuple[int, ...]
    a: tuple[int, ...]
    b: int

    @property
    def contains_origin(self) -> bool:
        return self.b == 0

    @property
    def normal(self) -> tuple[Fraction, ...]:
        """Covector ``e`` with the facet on ``e.X = 1``; for facets through 0, ``e.X = 0``."""
        if self.b == 0:
            return tuple(Fraction(x) for x in self.a)
        return tuple(Fraction(x, self.b) for x in self.a)


class IntegralPolytope:
    """Convex hull of finitely many lattice points in Z^n (n <= 4)."""

    def __init__(self, dim: int, vertices: Sequence[Point], facets: Sequence[Facet], affine_dim: int):
        self.dim = dim
        self.vertices = tuple(tuple(v) for v in vertices)
        self.facets = tuple(facets)
        self.affine_dim = affine_dim

    def __repr__(self) -> str:
        return f"IntegralPolytope(dim={self.dim}, vertices={list(self.vertices)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegralPolytope):
            return NotImplemented
        return self.dim == other.dim and set(self.vertices) == set(other.vertices)

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self.vertices)))

    @property
    def degenerate(self) -> bool:
        return self.affine_dim < self.dim

    @cached_property
    def contains_origin(self) -> bool:
        if self.degenerate:
            return contains_point(self, (0,) * self.dim)
        return all(f.b >= 0 for f in self.facets)

    def contains(self, u: Sequence[int]) -> bool:
        return contains_point(self, u)

    def in_cone(self, u: Sequence[int]) -> bool:
        """Membership in the cone over the polytope from the origin."""
        return all(_dot(f.a, u) <= 0 for f in self.facets if f.b == 0)

    def bounding_box(self) -> list[tuple[int, int]]:
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices))
                for i in range(self.dim)]

    @cached_property
    def faces(self) -> dict[int, list[frozenset[int]]]:
        """All faces by dimension, each face given as a set of vertex indices."""
        if self.degenerate:
            raise InvalidPolytopeError("face lattice requires a full-dimensional polytope")
        n = self.dim
        facet_sets = [frozenset(f.vertex_indices) for f in self.facets]
        out = {n - 1: list(dict.fromkeys(facet_sets))}
        for k in range(n - 2, -1, -1):
            found = {}
            for face in out[k + 1]:
                for g in facet_sets:
                    inter = face & g
                    if inter and inter != face and inter not in found:
                        if affine_dimension([self.vertices[i] for i in inter]) == k:
                            found[inter] = None
            out[k] = sorted(found, key=sorted)
        out[n] = [frozenset(range(len(self.vertices)))]
        return out

    def subfaces(self, face: frozenset[int]) -> list[frozenset[int]]:
        k = affine_dimension([self.vertices[i] for i in face])
        if k <= 0:
            return []
        return [g for g in self.faces[k - 1] if g <= face]

    def face_dimension(self, face: Iterable[int]) -> int:
        return affine_dimension([self.vertices[i] for i in face])


def contains_point(p: IntegralPolytope, u: Sequence[int]) -> bool:
    if not p.degenerate:
        return all(_dot(f.a, u) <= f.b for f in p.facets)
    # degenerate: u is a convex combination of the vertices
    m = len(p.vertices)
    rows = [[v[i] for v in p.vertices] for i in range(p.dim)] + [[1] * m]
    return lp.minimize([0] * m, rows, list(u) + [1]) is not None


def _extreme_points(points: list[Point]) -> list[Point]:
    out = []
    for i, pt in enumerate(points):
        others = points[:i] + points[i + 1:]
        if not others:
            out.append(pt)
            continue
        m = len(others)
        rows = [[q[j] for q in others] for j in range(len(pt))] + [[1] * m]
        if lp.minimize([0] * m, rows, list(pt) + [1]) is None:
            out.append(pt)
    return out


def _finish(n: int, points: list[Point], hyperplanes: list[tuple[tuple[int, ...], int]]) -> IntegralPolytope:
    """Keep the extreme points and attach vertex incidences to each facet hyperplane."""
    incident = [[h for h in hyperplanes if _dot(h[0], pt) == h[1]] for pt in points]
    vertices = sorted(pt for pt, hs in zip(points, incident) if hs and rank([h[0] for h in hs]) == n)
    facets = []
    for a, b in hyperplanes:
        idx = tuple(i for i, v in enumerate(vertices) if _dot(a, v) == b)
        if affine_dimension([vertices[i] for i in idx]) != n - 1:
            raise InvalidPolytopeError(f"hyperplane {a}.X <= {b} does not cut out a facet")
        facets.append(Facet(idx, a, b))
    facets.sort(key=lambda f: (f.vertex_indices, f.a))
    return IntegralPolytope(n, vertices, facets, n)


def hull(points: Iterable[Sequence[int]], n: int, facets: Sequence[tuple[Sequence, int]] | None = None) -> IntegralPolytope:
    """Convex hull of lattice points in Z^n.

    Facets are found by exact enumeration of supporting hyperplanes for ``n <= 3``.
    For ``n == 4`` the facet inequalities ``a.X <= b`` must be supplied.
    """
    if n not in SUPPORTED_DIMENSIONS:
        raise UnsupportedDimensionError(f"dimension {n} outside supported range {SUPPORTED_DIMENSIONS}")
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise InvalidPolytopeError("hull of an empty point set")
    if any(len(p) != n for p in pts):
        raise InvalidPolytopeError(f"all points must have length {n}")
    adim = affine_dimension(pts)
    if adim < n:
        return IntegralPolytope(n, sorted(_extreme_points(pts)), (), adim)
    if facets is not None:
        planes = []
        for a, b in facets:
            a, b = tuple(int(x) for x in a), int(b)
            if any(_dot(a, p) > b for p in pts):
                raise InvalidPolytopeError(f"supplied facet {a}.X <= {b} violated by input points")
            planes.append((a, b))
        return _finish(n, pts, planes)
    if n == 4:
        raise UnsupportedDimensionError("dimension 4 requires an explicit facet list")
    seen: set[tuple[tuple[int, ...], int]] = set()
    planes = []
    for combo in itertools.combinations(pts, n):
        a = hyperplane_normal(combo)
        if not any(a):
            continue
        b = _dot(a, combo[0])
        if (a, b) in seen or (tuple(-x for x in a), -b) in seen:
            continue
        vals = [_dot(a, p) for p in pts]
        if max(vals) <= b:
            key = (a, b)
        elif min(vals) >= b:
            key = (tuple(-x for x in a), -b)
        else:
            continue
        seen.add(key)
        planes.append(key)
    return _finish(n, pts, planes)


def hull_from_normals(n: int, vertices: Sequence[Sequence[int]], normals: Sequence[tuple[Sequence[Fraction], bool]]) -> IntegralPolytope:
    """Build from vertices and facet covectors ``e`` (``e.X <= 1``, or ``e.X <= 0`` through the origin)."""
    planes = []
    for e, through_origin in normals:
        e = [Fraction(x) for x in e]
        den = reduce(math.lcm, (x.denominator for x in e), 1)
        a = [int(x * den) for x in e]
        if through_origin:
            planes.append((primitive(a), 0))
        else:
            g = reduce(math.gcd, a, den)
            planes.append((tuple(x // g for x in a), den // g))
    return hull(vertices, n, facets=planes)


def facets_not_containing_origin(p: IntegralPolytope) -> list[Facet]:
    if p.degenerate:
        raise InvalidPolytopeError("polytope is not full-dimensional")
    if not p.contains_origin:
        raise InvalidPolytopeError("origin is not contained in the polytope")
    return [f for f in p.facets if not f.contains_origin]


def face_denominator(f: Facet) -> int:
    if f.contains_origin:
        raise InvalidPolytopeError("face denominator is defined for facets avoiding the origin")
    return reduce(math.lcm, (e.denominator for e in f.normal), 1)


def polytope_denominator(p: IntegralPolytope) -> int:
    return reduce(math.lcm, (face_denominator(f) for f in facets_not_containing_origin(p)), 1)


def weight(p: IntegralPolytope, u: Sequence[int], method: str = "lp"):
    """Least c >= 0 with u in c*P, as an exact Fraction, or INFINITY.

    ``method="lp"`` solves min sum(s) over s >= 0 with sum s_j V_j = u;
    ``method="facets"`` takes the max of e.u over facets avoiding 0.
    """
    if p.degenerate or not p.contains_origin:
        raise InvalidPolytopeError("weight needs a full-dimensional polytope containing the origin")
    if not any(u):
        return Fraction(0)
    if method == "facets":
        if not p.in_cone(u):
            return INFINITY
        return max([Fraction(0)] + [_dot(f.normal, u) for f in p.facets if f.b > 0])
    if method != "lp":
        raise ValueError(f"unknown weight method {method!r}")
    vs = [v for v in p.vertices if any(v)]
    rows = [[v[i] for v in vs] for i in range(p.dim)]
    res = lp.minimize([1] * len(vs), rows, list(u))
    return INFINITY if res is None else res[0]


def iter_lattice_points(p: IntegralPolytope, scale: int = 1) -> Iterator[Point]:
    """Lattice points of scale*P, generated lazily."""
    box = [range(scale * lo, scale * hi + 1) for lo, hi in p.bounding_box()]
    return (u for u in itertools.product(*box)
            if all(_dot(f.a, u) <= scale * f.b for f in p.facets))


def lattice_points(p: IntegralPolytope, scale: int = 1) -> list[Point]:
    return list(iter_lattice_points(p, scale))


def _pulling_simplices(p: IntegralPolytope, face: frozenset[int]) -> list[tuple[int, ...]]:
    k = p.face_dimension(face)
    if k == 0:
        return [tuple(face)]
    apex = min(face)
    out = []
    for sub in p.subfaces(face):
        if apex in sub:
            continue
        out.extend(s + (apex,) for s in _pulling_simplices(p, sub))
    return out


def triangulate_facet(p: IntegralPolytope, f: Facet) -> list[tuple[int, ...]]:
    return _pulling_simplices(p, frozenset(f.vertex_indices))


def normalized_volume(p: IntegralPolytope) -> int:
    """n! times the Euclidean volume, via pyramids from the origin over triangulated facets."""
    if p.degenerate:
        return 0
    apex = (0,) * p.dim if p.contains_origin else p.vertices[0]
    total = 0
    for f in p.facets:
        if _dot(f.a, apex) == f.b:
            continue
        for simplex in triangulate_facet(p, f):
            rows = [[x - y for x, y in zip(p.vertices[i], apex)] for i in simplex]
            total += abs(det_int(rows))
    return total
