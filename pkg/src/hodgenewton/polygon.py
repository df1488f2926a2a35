"""Planar lower convex polygons with integer abscissae and exact rational ordinates."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


@dataclass(frozen=True)
class LowerConvexPolygon:
    vertices: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        verts = tuple((int(x), Fraction(y)) for x, y in self.vertices)
        if not verts:
            raise ValueError("polygon needs at least one vertex")
        for (x0, _), (x1, _) in zip(verts, verts[1:]):
            if x1 <= x0:
                raise ValueError("abscissae must be strictly increasing")
        slopes = [(y1 - y0) / (x1 - x0) for (x0, y0), (x1, y1) in zip(verts, verts[1:])]
        if any(b <= a for a, b in zip(slopes, slopes[1:])):
            raise ValueError("slopes must be strictly increasing")
        object.__setattr__(self, "vertices", verts)

    @property
    def width(self) -> int:
        return self.vertices[-1][0] - self.vertices[0][0]

    @property
    def endpoint(self) -> tuple[int, Fraction]:
        return self.vertices[-1]

    def segments(self) -> list[tuple[Fraction, int]]:
        """(slope, horizontal length) pairs from left to right."""
        return [((y1 - y0) / (x1 - x0), x1 - x0)
                for (x0, y0), (x1, y1) in zip(self.vertices, self.vertices[1:])]

    def value_at(self, x) -> Fraction:
        x = Fraction(x)
        (x0, y0) = self.vertices[0]
        if x < x0 or x > self.vertices[-1][0]:
            raise ValueError(f"x={x} outside polygon range")
        for (xa, ya), (xb, yb) in zip(self.vertices, self.vertices[1:]):
            if x <= xb:
                return ya + (yb - ya) * (x - xa) / (xb - xa)
        return y0

    def __str__(self) -> str:
        return " ".join(f"({x},{y})" for x, y in self.vertices)


def lower_hull(points: Iterable[tuple[int, object]]) -> LowerConvexPolygon:
    """Lower convex hull of planar points; points with infinite ordinate are skipped."""
    pts = []
    for x, y in points:
        if isinstance(y, float) and math.isinf(y):
            continue
        pts.append((int(x), Fraction(y)))
    if not pts:
        raise ValueError("lower_hull of an empty point set")
    pts.sort()
    hull: list[tuple[int, Fraction]] = []
    for pt in pts:
        if hull and hull[-1][0] == pt[0]:
            # same abscissa: keep the lower point
            if pt[1] >= hull[-1][1]:
                continue
            hull.pop()
        while len(hull) >= 2:
            (ox, oy), (ax, ay) = hull[-2], hull[-1]
            cross = (ax - ox) * (pt[1] - oy) - (ay - oy) * (pt[0] - ox)
            if cross > 0:
                break
            hull.pop()
        hull.append(pt)
    return LowerConvexPolygon(tuple(hull))


@dataclass(frozen=True)
class ComparisonReport:
    lies_above: bool
    equal: bool
    endpoints_equal: bool
    first_divergence: int | None

    def to_dict(self) -> dict:
        return {
            "lies_above": self.lies_above,
            "equal": self.equal,
            "endpoints_equal": self.endpoints_equal,
            "first_divergence": self.first_divergence,
        }


def polygon_compare(a: LowerConvexPolygon, b: LowerConvexPolygon) -> ComparisonReport:
    """Compare ``a`` against ``b`` at every integer abscissa of their common range."""
    if a.vertices[0] != (0, 0) or b.vertices[0] != (0, 0):
        raise ValueError("both polygons must start at (0, 0)")
    end = min(a.endpoint[0], b.endpoint[0])
    above = True
    first = None
    for x in range(end + 1):
        ya, yb = a.value_at(x), b.value_at(x)
        if ya != yb and first is None:
            first = x
        if ya < yb:
            above = False
    return ComparisonReport(
        lies_above=above,
        equal=a.vertices == b.vertices,
        endpoints_equal=a.endpoint == b.endpoint,
        first_divergence=first,
    )


def pointwise_min(polygons: Sequence[LowerConvexPolygon]) -> LowerConvexPolygon:
    """Lower convex hull of the pointwise minimum over the common integer range."""
    if not polygons:
        raise ValueError("no polygons")
    end = min(p.endpoint[0] for p in polygons)
    return lower_hull((x, min(p.value_at(x) for p in polygons)) for x in range(end + 1))


def polygon_to_json(poly: LowerConvexPolygon) -> dict:
    return {"vertices": [[x, y.numerator, y.denominator] for x, y in poly.vertices]}


def polygon_from_json(data: dict) -> LowerConvexPolygon:
    return LowerConvexPolygon(tuple((x, Fraction(num, den)) for x, num, den in data["vertices"]))


def polygon_to_csv(poly: LowerConvexPolygon) -> str:
    return "\n".join(f"{x},{y.numerator}/{y.denominator},{float(y)!r}" for x, y in poly.vertices)
