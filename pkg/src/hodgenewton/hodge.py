"""Weighted lattice-point counts, Hodge numbers and Hodge polygons."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import InternalInconsistencyError
from .polygon import LowerConvexPolygon
from .polytope import (
    IntegralPolytope,
    facets_not_containing_origin,
    iter_lattice_points,
    normalized_volume,
    polytope_denominator,
    weight,
)

log = logging.getLogger(__name__)


@dataclass
class HodgeData:
    n: int
    D: int
    # sparse: k with no lattice points (or zero Hodge number) is absent and reads as 0
    W: Counter
    H: Counter = field(default_factory=Counter)
    volume: int | None = None
    warnings: list[str] = field(default_factory=list)


def weighted_lattice_counts(p: IntegralPolytope) -> HodgeData:
    """Count lattice points u by D*w(u) for 0 <= D*w(u) <= nD."""
    facets_not_containing_origin(p)
    n = p.dim
    d = polytope_denominator(p)
    counts: Counter = Counter()
    for u in iter_lattice_points(p, scale=n):
        w = weight(p, u, method="facets")
        k = w * d
        if k.denominator != 1:
            raise InternalInconsistencyError(f"D*w({u}) = {k} is not an integer")
        counts[int(k)] += 1
    return HodgeData(n=n, D=d, W=counts)


def hodge_numbers(p: IntegralPolytope, data: HodgeData | None = None) -> HodgeData:
    data = data or weighted_lattice_counts(p)
    n, d = data.n, data.D
    # H(k) can only be nonzero at k = j + i*D for some j with W(j) > 0
    ks = sorted({j + i * d for j in data.W for i in range(n + 1) if j + i * d <= n * d})
    H = Counter()
    for k in ks:
        h = sum((-1) ** i * comb(n, i) * data.W[k - i * d] for i in range(n + 1))
        if h:
            H[k] = h
    data.H = H
    data.volume = normalized_volume(p)
    total = sum(data.H.values())
    if total != data.volume:
        raise InternalInconsistencyError(
            f"sum of Hodge numbers {total} differs from normalized volume {data.volume}")
    for k, h in data.H.items():
        if h < 0:
            msg = f"negative Hodge number H({k}) = {h}"
            log.warning(msg)
            data.warnings.append(msg)
    return data


def polygon_from_hodge(data: HodgeData) -> LowerConvexPolygon:
    x, y = 0, Fraction(0)
    verts = [(0, Fraction(0))]
    for k in sorted(data.H):
        h = max(data.H[k], 0)
        if h:
            x += h
            y += Fraction(k, data.D) * h
            verts.append((x, y))
    return LowerConvexPolygon(tuple(verts))


def hodge_polygon(p: IntegralPolytope) -> LowerConvexPolygon:
    return polygon_from_hodge(hodge_numbers(p))
