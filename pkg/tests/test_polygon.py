from fractions import Fraction

import math
import pytest
from hypothesis import given, settings, strategies as st

from hodgenewton.polygon import (
    LowerConvexPolygon,
    lower_hull,
    pointwise_min,
    polygon_compare,
    polygon_from_json,
    polygon_to_csv,
    polygon_to_json,
)

import oracles

HP_TRIANGLE = lower_hull([(0, 0), (1, 0), (2, Fraction(1, 2)), (4, 2), (5, 3), (7, Fraction(11, 2)), (8, 7)])

points = st.lists(st.tuples(st.integers(0, 10), st.fractions(0, 10, max_denominator=6)), min_size=1, max_size=10)


@settings(max_examples=200)
@given(points)
def test_lower_hull_against_chord_oracle(pts):
    poly = lower_hull(pts)
    xs = sorted({x for x, _ in pts})
    for x in range(xs[0], xs[-1] + 1):
        assert poly.value_at(x) == oracles.lower_hull_value(pts, x)
    slopes = [s for s, _ in poly.segments()]
    assert slopes == sorted(slopes) and len(set(slopes)) == len(slopes)


def test_infinite_ordinates_skipped():
    poly = lower_hull([(0, 0), (1, math.inf), (2, 1)])
    assert poly.vertices == ((0, 0), (2, 1))


def test_csv_and_json():
    poly = lower_hull([(0, 0), (1, 0)])
    assert polygon_to_csv(poly) == "0,0/1,0.0\n1,0/1,0.0"
    rows = polygon_to_csv(HP_TRIANGLE).splitlines()
    assert len(rows) == 7 and rows[-1] == "8,7/1,7.0"
    assert polygon_from_json(polygon_to_json(HP_TRIANGLE)) == HP_TRIANGLE
    assert polygon_to_json(HP_TRIANGLE)["vertices"][2] == [2, 1, 2]


def test_compare_triangle():
    np_ = lower_hull([(0, 0), (1, 0), (8, 7)])
    rep = polygon_compare(np_, HP_TRIANGLE)
    assert rep.lies_above and rep.endpoints_equal and not rep.equal
    assert rep.first_divergence == 2
    assert polygon_compare(HP_TRIANGLE, HP_TRIANGLE).equal


def test_compare_not_above():
    rep = polygon_compare(lower_hull([(0, 0), (2, 0)]), lower_hull([(0, 0), (1, 0), (2, 1)]))
    assert not rep.lies_above and not rep.endpoints_equal


@settings(max_examples=200)
@given(st.lists(points, min_size=1, max_size=4))
def test_pointwise_min_is_below_each(raw):
    polys = [lower_hull([(0, 0)] + [(x + 1, y) for x, y in pts] + [(12, 0)]) for pts in raw]
    m = pointwise_min(polys)
    for x in range(13):
        assert all(m.value_at(x) <= p.value_at(x) for p in polys)
        assert m.value_at(x) <= min(p.value_at(x) for p in polys)


def test_invalid_polygon_rejected():
    with pytest.raises(ValueError):
        LowerConvexPolygon(((0, Fraction(0)), (1, Fraction(1)), (2, Fraction(1))))
