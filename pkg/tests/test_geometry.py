import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hodgenewton.errors import InvalidPolytopeError, UnsupportedDimensionError
from hodgenewton.hodge import hodge_numbers, hodge_polygon, weighted_lattice_counts
from hodgenewton.linalg import det_int, matmul, smith_normal_form
from hodgenewton.lp import minimize
from hodgenewton.polytope import (
    face_denominator,
    facets_not_containing_origin,
    hull,
    lattice_points,
    normalized_volume,
    polytope_denominator,
    weight,
)

import oracles

TRIANGLE = hull([(0, 0), (1, 3), (3, 1), (1, 1)], 2)


def random_polytope(draw, n):
    pts = draw(st.lists(st.tuples(*[st.integers(-3, 3)] * n), min_size=n + 1, max_size=n + 4))
    P = hull([(0,) * n] + pts, n)
    return P


@st.composite
def full_polytopes(draw, dims=(1, 2, 3)):
    n = draw(st.sampled_from(dims))
    P = random_polytope(draw, n)
    if P.degenerate:
        # fall back to a simplex so every draw is usable
        P = hull([(0,) * n] + [tuple(draw(st.integers(1, 3)) if i == j else 0 for i in range(n)) for j in range(n)], n)
    return P


# -- hull ----------------------------------------------------------------------------------

def test_triangle_hull():
    # (1,1) lies inside the triangle
    assert set(TRIANGLE.vertices) == {(0, 0), (1, 3), (3, 1)}
    assert [f.normal for f in facets_not_containing_origin(TRIANGLE)] == [(Fraction(1, 4), Fraction(1, 4))]


def test_unit_square_facets():
    P = hull([(0, 0), (1, 0), (0, 1), (1, 1)], 2)
    assert len(P.facets) == 4
    assert all(f.a.count(0) == 1 for f in P.facets)


def test_degenerate_hull_reports_affine_dimension():
    P = hull([(0, 0), (1, 1), (2, 2)], 2)
    assert P.degenerate and P.affine_dim == 1
    assert P.vertices == ((0, 0), (2, 2))


def test_dimension_four_needs_facets():
    with pytest.raises(UnsupportedDimensionError):
        hull([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], 4)
    with pytest.raises(UnsupportedDimensionError):
        hull([(0,) * 5], 5)


def test_supplied_facet_violated():
    with pytest.raises(InvalidPolytopeError):
        hull([(0, 0), (2, 0), (0, 2)], 2, facets=[((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)])


@settings(max_examples=200)
@given(full_polytopes())
def test_hull_contains_points_and_facets_are_tight(P):
    for f in P.facets:
        assert math.gcd(*f.a) == 1
        assert all(sum(a * x for a, x in zip(f.a, v)) <= f.b for v in P.vertices)
        assert len(f.vertex_indices) >= P.dim


# -- weight ----------------------------------------------------------------------------------

def test_weight_examples():
    assert weight(TRIANGLE, (1, 1)) == Fraction(1, 2)
    assert weight(TRIANGLE, (2, 2)) == 1
    assert weight(TRIANGLE, (0, 0)) == 0
    assert weight(TRIANGLE, (1, 0)) == math.inf
    assert weight(TRIANGLE, (1, 0), method="facets") == math.inf


@settings(max_examples=200)
@given(full_polytopes(), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_weight_routes_agree_with_scipy(P, u):
    u = tuple(u[: P.dim])
    w_lp, w_f = weight(P, u, "lp"), weight(P, u, "facets")
    assert w_lp == w_f
    ref = oracles.weight_lp(P.vertices, u)
    if w_lp == math.inf:
        assert ref == math.inf
    else:
        assert abs(float(w_lp) - ref) < 1e-7


@settings(max_examples=200)
@given(full_polytopes(), st.lists(st.integers(-3, 3), min_size=6, max_size=6), st.integers(1, 5))
def test_weight_homogeneous_subadditive_integral(P, raw, m):
    if not P.contains_origin:
        return
    u, v = tuple(raw[: P.dim]), tuple(raw[3:3 + P.dim])
    wu, wv = weight(P, u, "facets"), weight(P, v, "facets")
    assert weight(P, tuple(m * x for x in u), "facets") == m * wu
    wuv = weight(P, tuple(a + b for a, b in zip(u, v)), "facets")
    assert wuv <= wu + wv
    D = polytope_denominator(P)
    for w in (wu, wv, wuv):
        if w != math.inf:
            assert (D * w).denominator == 1


# -- LP ----------------------------------------------------------------------------------

def test_lp_small():
    val, x = minimize([1, 1], [[1, 2]], [Fraction(3)])
    assert val == Fraction(3, 2) and x == [0, Fraction(3, 2)]
    assert minimize([1], [[1]], [-1]) is None


@settings(max_examples=200)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(0, 4), min_size=3, max_size=3))
def test_lp_against_scipy(A, x0):
    # b = A x0 keeps the problem feasible; costs positive keep it bounded
    b = [sum(a * x for a, x in zip(row, x0)) for row in A]
    c = [1, 2, 3]
    val, x = minimize(c, A, b)
    assert all(xi >= 0 for xi in x)
    assert [sum(a * xi for a, xi in zip(row, x)) for row in A] == b
    from scipy.optimize import linprog
    ref = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert abs(float(val) - ref.fun) < 1e-7


# -- denominators -------------------------------------------------------------------------

def test_triangle_denominator():
    assert polytope_denominator(TRIANGLE) == 4
    assert [face_denominator(f) for f in facets_not_containing_origin(TRIANGLE)] == [4]


def test_interval_denominator():
    assert polytope_denominator(hull([(0,), (1,)], 1)) == 1
    assert polytope_denominator(hull([(0,), (3,)], 1)) == 3


# -- volume and Hodge numbers ------------------------------------------------------------

def test_triangle_hodge():
    data = hodge_numbers(TRIANGLE)
    assert data.D == 4 and data.volume == 8
    assert [data.W[k] for k in range(5)] == [1, 0, 1, 2, 3]
    assert [data.H[k] for k in range(9)] == [1, 0, 1, 2, 1, 2, 1, 0, 0]
    assert str(hodge_polygon(TRIANGLE)) == "(0,0) (1,0) (2,1/2) (4,2) (5,3) (7,11/2) (8,7)"


def test_interval_hodge():
    assert str(hodge_polygon(hull([(0,), (1,)], 1))) == "(0,0) (1,0)"
    assert str(hodge_polygon(hull([(0,), (2,)], 1))) == "(0,0) (1,0) (2,1/2)"


def test_simplex_volume():
    P = hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert normalized_volume(P) == 1
    assert normalized_volume(hull([(0, 0), (2, 0), (0, 2)], 2)) == 4


@settings(max_examples=200)
@given(full_polytopes())
def test_volume_matches_scipy_and_hodge_sum(P):
    vol = normalized_volume(P)
    assert vol == oracles.normalized_volume(P.vertices)
    if P.contains_origin:
        data = hodge_numbers(P)
        assert sum(data.H.values()) == vol


def test_lattice_points_count():
    assert len(lattice_points(hull([(0, 0), (2, 0), (0, 2)], 2))) == 6
    assert len(lattice_points(TRIANGLE, 2)) == len(lattice_points(hull([(0, 0), (2, 6), (6, 2), (2, 2)], 2)))


def test_weighted_counts_need_integral_weights():
    data = weighted_lattice_counts(TRIANGLE)
    assert data.W[0] == 1


# -- Smith normal form ---------------------------------------------------------------------

@settings(max_examples=200)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(
    st.lists(st.lists(st.integers(-6, 6), min_size=m, max_size=m), min_size=m, max_size=m + 1))))
def test_smith_normal_form(args):
    (M,) = args
    U, S, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == S
    assert abs(det_int(U)) == 1 and abs(det_int(V)) == 1
    diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
