import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from hodgenewton.errors import FaceParametrizationError, PreconditionError, ValidationError
from hodgenewton.linalg import det_int
from hodgenewton.lfunction import deligne_check, newton_polytope
from hodgenewton.ordinarity import (
    D_closed_form,
    counterexample_driver,
    deligne_polytope,
    face_stability,
    facial_diagnosis,
    gnp_sample,
    necessary_condition,
    p_action_orbits,
    sample_family,
    unit_box_solve,
)
from hodgenewton.polytope import hull, polytope_denominator

import oracles

F = Fraction


def test_deligne_polytope_n2_d4():
    g = deligne_polytope(2, 4)
    assert {tuple(v) for v in g.facet_vertices(g.delta_d)} == {(-1, 0, 0), (1, 4, 0), (1, 0, 4)}
    assert g.delta_d.normal == (F(-1), F(1, 2), F(1, 2))
    assert g.delta_d_prime.normal == (F(1), F(0), F(0))


def test_deligne_polytope_n1_d2():
    g = deligne_polytope(1, 2)
    assert set(g.Delta.vertices) == {(-1, 0), (1, 0), (1, 2)}
    assert g.Delta.contains((0, 0))


def test_deligne_polytope_n2_d3_denominator():
    g = deligne_polytope(2, 3)
    assert g.delta_d.normal == (F(-1), F(2, 3), F(2, 3))
    assert polytope_denominator(g.Delta_d) == 3


def test_deligne_polytope_n3():
    g = deligne_polytope(3, 4)
    assert len(g.Delta.vertices) == 5
    assert polytope_denominator(g.Delta) == 2


def test_deligne_polytope_errors():
    with pytest.raises(ValidationError):
        deligne_polytope(4, 4)
    with pytest.raises(ValidationError):
        deligne_polytope(2, 1)


@pytest.mark.parametrize("d", range(2, 11))
def test_D_closed_form(d):
    assert D_closed_form(d) == polytope_denominator(deligne_polytope(2, d).Delta)
    assert D_closed_form(d) == polytope_denominator(deligne_polytope(2, d).Delta_d)


def test_unit_box_examples():
    sols = unit_box_solve([[-1, 1], [0, 4]])
    assert sols.solutions == [(F(k, 4), F(k, 4)) for k in range(4)]
    assert sols.det == -4
    assert unit_box_solve([[1, 0], [0, 1]]).solutions == [(0, 0)]
    with pytest.raises(PreconditionError):
        unit_box_solve([[1, 2], [2, 4]])


square = st.integers(1, 3).flatmap(
    lambda m: st.lists(st.lists(st.integers(-5, 5), min_size=m, max_size=m), min_size=m, max_size=m))


@settings(max_examples=200)
@given(square)
def test_unit_box_count_against_grid(M):
    det = det_int(M)
    assume(det != 0 and abs(det) <= 24)
    sols = unit_box_solve(M)
    assert len(sols.solutions) == abs(det)
    assert sorted(sols.solutions) == oracles.unit_box_grid(M)
    assert sols.weights == [sum(r, F(0)) for r in sols.solutions]


@settings(max_examples=200)
@given(square, st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_p_action_is_a_permutation(M, p):
    det = det_int(M)
    assume(det != 0 and abs(det) <= 60 and det % p)
    rep = p_action_orbits(unit_box_solve(M), p)
    assert sorted(rep.images) == list(range(len(rep.images)))
    members = sorted(i for o in rep.orbits for i in o.members)
    assert members == list(range(len(rep.images)))
    # p = 1 mod lcm of denominators fixes everything
    den = math.lcm(*[x.denominator for r in rep.solutions.solutions for x in r])
    q = 1 + den
    if q % p and all(q % s for s in range(2, int(q ** 0.5) + 1)):
        assert all(len(o.members) == 1 for o in p_action_orbits(unit_box_solve(M), q).orbits)


def test_p_action_precondition():
    with pytest.raises(PreconditionError, match="det"):
        p_action_orbits(unit_box_solve([[-1, 1], [0, 4]]), 2)


def test_orbits_d4_p3():
    rep = p_action_orbits(unit_box_solve([[-1, 1], [0, 4]]), 3)
    by_member = {tuple(sorted(o.members)): o for o in rep.orbits}
    assert not by_member[(1, 3)].stable and sorted(by_member[(1, 3)].weights) == [F(1, 2), F(3, 2)]
    assert by_member[(2,)].stable and by_member[(2,)].weights == [1]
    assert by_member[(0,)].stable
    assert not rep.stable


def test_face_stability_examples():
    g4 = deligne_polytope(2, 4)
    assert not face_stability([(-1, 0, 0), (1, 4, 0)], 3, g4.Delta_d).stable
    g3 = deligne_polytope(2, 3)
    rep = face_stability([(-1, 0, 0), (1, 3, 0), (1, 0, 3)], 7, g3.Delta_d)
    assert rep.stable and len(rep.report.solutions.solutions) == 9
    with pytest.raises(FaceParametrizationError):
        face_stability([(1, 0, 0), (2, 0, 0)], 3)
    with pytest.raises(FaceParametrizationError):
        face_stability([(-1, 0, 0), (0, 1, 0)], 3, g4.Delta_d)   # (0,1,0) has weight 1/2


def test_necessary_condition():
    assert necessary_condition(3, deligne_polytope(2, 4).Delta_d) == {"D": 2, "p_mod_D": 1, "congruent": True}
    assert necessary_condition(5, deligne_polytope(2, 3).Delta_d)["congruent"] is False
    assert necessary_condition(7, hull([(0, 0), (1, 0), (0, 1)], 2))["congruent"] is True


def test_facial_diagnosis_deligne_family():
    g = deligne_polytope(2, 4)
    diag = facial_diagnosis(g.Delta, 3, g.family_support())
    prime = next(f for f in diag.facets if f.D == 1)
    assert prime.stable
    assert diag.status == "unstable"
    assert diag.verdict == "face [[-1, 0, 0], [1, 4, 0]] unstable"


def test_facial_diagnosis_of_a_sampled_member():
    f = sample_family(2, 4, 3, 1, seed=5)[0]
    assert facial_diagnosis(f, 3).status == "unstable"


def test_facial_diagnosis_stable_cases():
    assert facial_diagnosis(deligne_polytope(2, 3).Delta, 7).verdict == "all faces stable"
    g = deligne_polytope(2, 3)
    assert facial_diagnosis(g.Delta, 7, g.family_support()).verdict == "all faces stable"
    assert facial_diagnosis(hull([(0,), (1,)], 1), 5).verdict == "all faces stable"


def test_facial_diagnosis_congruence_failure():
    diag = facial_diagnosis(deligne_polytope(2, 3).Delta, 5)
    assert diag.status == "unstable" and "mod D = 3" in diag.verdict


def test_facial_diagnosis_non_simplex():
    sq = hull([(-1, -1), (1, -1), (-1, 1), (1, 1), (0, 0)], 2)
    assert facial_diagnosis(sq, 3).verdict == "all faces stable"
    P = hull([(0, 0, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1), (0, 0, 1)], 3)
    assert facial_diagnosis(P, 3).verdict == "inconclusive (non-simplex face)"


def test_counterexample_d4_p3():
    rep = counterexample_driver(4, 3)
    data = rep.to_dict()
    assert rep.D == 2 and rep.congruent and rep.det == -4
    assert [tuple(F(*x) for x in s["r"]) for s in data["solutions"]] == [(F(k, 4), F(k, 4)) for k in range(4)]
    assert [F(*s["weight"]) for s in data["solutions"]] == [F(2 * k, 4) for k in range(4)]
    assert [sorted(F(*w) for w in o["weights"]) for o in data["unstable_orbits"]] == [[F(1, 2), F(3, 2)]]
    assert rep.unstable_k == [1, 3] and rep.half_shift_k == [1]
    assert "not generically ordinary" in rep.verdict
    assert data["subpolytope_Pi_1"]["vertices"] == [[0, 0, 0], [-1, 0, 0], [1, 4, 0], [1, 3, 1]]
    assert any("boundary decomposition" in c for c in data["citations"])


def test_counterexample_d8_p5():
    rep = counterexample_driver(8, 5)
    assert rep.half_shift_k == [1, 3]
    for k in rep.half_shift_k:
        assert (5 * F(k, 8)) % 1 == F(k, 8) + F(1, 2)
    assert rep.unstable_k == [1, 3, 5, 7]


@pytest.mark.parametrize("d,p,q", [(4, 3, 7), (4, 3, 11), (8, 5, 13), (12, 7, 19)])
def test_counterexample_verdict_invariant_mod_d(d, p, q):
    a, b = counterexample_driver(d, p), counterexample_driver(d, q)
    assert a.verdict == b.verdict
    assert a.unstable_k == b.unstable_k and a.half_shift_k == b.half_shift_k


def test_odd_k_orbit_weights():
    for d, p in [(4, 3), (8, 5), (12, 7), (16, 41)]:
        rep = counterexample_driver(d, p)
        sols = rep.tau.report.solutions
        for o in rep.tau.report.orbits:
            ks = [sols.solutions[i][0] * d for i in o.members]
            for k in ks:
                if k % 2 and 2 * k < d:
                    assert sorted(o.weights) == [F(2 * k, d), F(2 * k, d) + 1]


@pytest.mark.parametrize("d,p", [(3, 3), (4, 5), (6, 5), (4, 4)])
def test_counterexample_preconditions(d, p):
    with pytest.raises(PreconditionError):
        counterexample_driver(d, p)


def test_sample_family_shapes():
    fs = sample_family(1, 2, 3, 3, seed=1)
    assert len(fs) == 3
    for f in fs:
        assert f.first_index == 0
        assert max(e[1] for e in f.exponents if e[0] == 1) == 2
        assert all(e[1] == 0 for e in f.exponents if e[0] == 0)
        assert newton_polytope(f) == deligne_polytope(1, 2).Delta
    for f in sample_family(2, 4, 5, 3, seed=2):
        assert all(sum(e[1:]) <= 1 for e in f.exponents if e[0] == 0)
        assert newton_polytope(f) == deligne_polytope(2, 4).Delta
    assert sample_family(2, 4, 5, 2, seed=9) == sample_family(2, 4, 5, 2, seed=9)


def test_sample_family_h_is_deligne():
    from hodgenewton.laurent import LaurentPolynomial
    for f in sample_family(2, 3, 5, 5, seed=3):
        h = LaurentPolynomial(2, 5, {e[1:]: c for e, c in f.terms.items() if e[0] == 1})
        assert h.total_degree() == 3 and deligne_check(h).is_deligne


def test_gnp_sample_intervals():
    assert str(gnp_sample(hull([(0,), (1,)], 1), 3, 5, 0).infimum) == "(0,0) (1,0)"
    res = gnp_sample(hull([(0,), (2,)], 1), 3, 5, 0)
    assert str(res.infimum) == "(0,0) (1,0) (2,1/2)"
    assert res.infimum == res.hodge
    assert "upper bound" in res.label


def test_gnp_sample_lies_above_hodge():
    P = hull([(0, 0), (2, 1), (1, 2)], 2)
    res = gnp_sample(P, 2, 3, seed=4)
    for _, np_ in res.trials:
        assert np_.endpoint == res.hodge.endpoint
        assert all(np_.value_at(x) >= res.hodge.value_at(x) for x in range(np_.width + 1))


def test_gnp_sample_refuses_counterexample_family():
    from hodgenewton.errors import BudgetExceededError
    with pytest.raises(BudgetExceededError) as exc:
        gnp_sample((2, 4), 3, 1, 0)
    assert exc.value.required > exc.value.budget
