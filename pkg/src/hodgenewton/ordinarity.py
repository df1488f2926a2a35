"""Deligne polytopes, facial diagnostics, the unit-box congruence solver and p-stability."""
from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    FaceParametrizationError,
    GenerationError,
    PreconditionError,
    ValidationError,
)
from .fields import DEFAULT_TORUS_BUDGET, is_prime, require_prime
from .hodge import hodge_polygon
from .laurent import LaurentPolynomial
from .lfunction import deligne_check, l_polynomial, newton_polygon, newton_polytope, nondegeneracy_witness_search, points_on_face
from .expsums import check_budget
from .linalg import det_int, hyperplane_normal, rank, smith_normal_form
from .polygon import LowerConvexPolygon, pointwise_min, polygon_compare
from .polytope import (
    Facet,
    IntegralPolytope,
    face_denominator,
    facets_not_containing_origin,
    hull,
    lattice_points,
    normalized_volume,
    polytope_denominator,
    weight,
)

log = logging.getLogger(__name__)

BOUNDARY_CITATION = ("boundary decomposition theorem (D. Wan, Variation of p-adic Newton polygons "
                     "for L-functions of exponential sums, 1993, Theorem 5.1); recorded, not executed")
FACIAL_CITATION = "facial decomposition theorem (Wan): f is ordinary iff every facet restriction is ordinary"
LE_CITATION = "Le: the face x0*h(x) of the Deligne polytope is generically ordinary"


def frac_part(x: Fraction) -> Fraction:
    return x - math.floor(x)


def _fmt(x: Fraction) -> list[int]:
    return [x.numerator, x.denominator]


# -- Deligne polytopes --------------------------------------------------------------------

@dataclass
class DeligneGeometry:
    n: int
    d: int
    Delta: IntegralPolytope
    delta_d: Facet
    delta_d_prime: Facet
    Delta_d: IntegralPolytope
    Delta_d_prime: IntegralPolytope

    def facet_vertices(self, facet: Facet) -> list[tuple[int, ...]]:
        return [self.Delta.vertices[i] for i in facet.vertex_indices]

    def family_support(self) -> list[tuple[int, ...]]:
        """Exponents available to x0*h + g + 1/x0 with deg h <= d and deg g < d/2."""
        n, d = self.n, self.d
        pts = [(-1,) + (0,) * n]
        for a in itertools.product(range(d + 1), repeat=n):
            if sum(a) <= d:
                pts.append((1,) + a)
            if 2 * sum(a) < d:
                pts.append((0,) + a)
        return pts


def _unit(n: int, i: int, scale: int = 1) -> tuple[int, ...]:
    return tuple(scale if j == i else 0 for j in range(n))


def simplex_hull(vertices: Sequence[Sequence[int]]) -> IntegralPolytope:
    """Hull of n+1 affinely independent points in Z^n, with facets written down directly."""
    n = len(vertices[0])
    if len(vertices) != n + 1:
        raise ValidationError("a full simplex needs n+1 vertices")
    planes = []
    for i in range(n + 1):
        others = [v for j, v in enumerate(vertices) if j != i]
        a = hyperplane_normal(others)
        if not any(a):
            raise ValidationError("simplex vertices are affinely dependent")
        b = sum(x * y for x, y in zip(a, others[0]))
        if sum(x * y for x, y in zip(a, vertices[i])) > b:
            a, b = tuple(-x for x in a), -b
        planes.append((a, b))
    return hull(vertices, n, facets=planes)


def deligne_polytope(n: int, d: int) -> DeligneGeometry:
    """Newton polytope of x0*h(x1..xn) + g + 1/x0 (deg h = d), in Z^{n+1} with x0 first."""
    if n not in (1, 2, 3):
        raise ValidationError(f"Deligne polytopes supported for n in 1..3, got {n}")
    if d < 2:
        raise ValidationError("degree d must be at least 2")
    m = n + 1
    minus_e0 = _unit(m, 0, -1)
    e0 = _unit(m, 0)
    tops = [tuple(a + b for a, b in zip(e0, _unit(m, i, d))) for i in range(1, m)]
    # facets: x0 <= 1, -x0 + (2/d) sum x_i <= 1, and x_i >= 0
    from .polytope import hull_from_normals
    normals = [((1,) + (0,) * n, False), ((-1,) + (Fraction(2, d),) * n, False)]
    normals += [(tuple(-Fraction(int(j == i)) for j in range(m)), True) for i in range(1, m)]
    Delta = hull_from_normals(m, [minus_e0, e0, (0,) * m] + tops, normals)
    by_vertices = {frozenset(Delta.vertices[i] for i in f.vertex_indices): f for f in Delta.facets}
    delta = by_vertices.get(frozenset([minus_e0] + tops))
    delta_prime = by_vertices.get(frozenset([e0] + tops))
    if delta is None or delta_prime is None:
        raise AssertionError("Deligne polytope facets not found")
    # sign-corrected hyperplane: -X0 + (2/d)(X1 + ... + Xn) = 1
    expected = (Fraction(-1),) + (Fraction(2, d),) * n
    if delta.normal != expected or delta_prime.normal != (Fraction(1),) + (Fraction(0),) * n:
        raise AssertionError("Deligne facet normals disagree with the closed form")
    others = [f for f in facets_not_containing_origin(Delta) if f not in (delta, delta_prime)]
    if others:
        raise AssertionError("unexpected facets avoiding the origin")
    return DeligneGeometry(
        n=n, d=d, Delta=Delta, delta_d=delta, delta_d_prime=delta_prime,
        Delta_d=simplex_hull([(0,) * m, minus_e0] + tops),
        Delta_d_prime=simplex_hull([(0,) * m, e0] + tops),
    )


def D_closed_form(d: int) -> int:
    if d < 2:
        raise ValidationError("d must be at least 2")
    return d if d % 2 else d // 2


# -- unit box solutions and the p-action ----------------------------------------------------

@dataclass
class UnitBoxSolutionSet:
    M: list[list[int]]
    solutions: list[tuple[Fraction, ...]]
    weights: list[Fraction]

    @property
    def det(self) -> int:
        return det_int(self.M) if len(self.M) == len(self.M[0]) else None

    @property
    def index(self) -> int:
        return len(self.solutions)

    def position(self, r: tuple[Fraction, ...]) -> int:
        return self._lookup[r]

    def __post_init__(self):
        self._lookup = {r: i for i, r in enumerate(self.solutions)}


def unit_box_solve(M: Sequence[Sequence[int]]) -> UnitBoxSolutionSet:
    """All r in ([0,1) cap Q)^m with M r = 0 mod 1, via Smith normal form U M V = S."""
    M = [list(map(int, row)) for row in M]
    m = len(M[0])
    if rank(M) < m:
        raise PreconditionError("M is singular (columns linearly dependent)")
    _, S, V = smith_normal_form(M)
    diag = [S[i][i] for i in range(m)]
    sols = set()
    for ys in itertools.product(*[range(s) for s in diag]):
        y = [Fraction(a, s) for a, s in zip(ys, diag)]
        r = tuple(frac_part(sum(V[i][j] * y[j] for j in range(m))) for i in range(m))
        sols.add(r)
    solutions = sorted(sols, key=lambda r: (sum(r), r))
    return UnitBoxSolutionSet(M, solutions, [sum(r, Fraction(0)) for r in solutions])


@dataclass
class Orbit:
    members: list[int]
    weights: list[Fraction]

    @property
    def stable(self) -> bool:
        return len(set(self.weights)) == 1


@dataclass
class StabilityReport:
    p: int
    solutions: UnitBoxSolutionSet
    orbits: list[Orbit]
    images: list[int]

    @property
    def stable(self) -> bool:
        return all(o.stable for o in self.orbits)

    def unstable_orbits(self) -> list[Orbit]:
        return [o for o in self.orbits if not o.stable]

    def to_dict(self) -> dict:
        sols = self.solutions.solutions
        return {
            "p": self.p,
            "M": self.solutions.M,
            "solutions": [[_fmt(x) for x in r] for r in sols],
            "weights": [_fmt(w) for w in self.solutions.weights],
            "images": [[_fmt(x) for x in sols[i]] for i in self.images],
            "orbits": [{"members": [[_fmt(x) for x in sols[i]] for i in o.members],
                        "weights": [_fmt(w) for w in o.weights],
                        "stable": o.stable} for o in self.orbits],
            "verdict": "stable" if self.stable else "unstable",
        }


def p_action_orbits(sols: UnitBoxSolutionSet, p: int) -> StabilityReport:
    """Cycle decomposition of r -> ({p r_1}, ..., {p r_m}) on the solution set."""
    den = 1
    for r in sols.solutions:
        for x in r:
            den = math.lcm(den, x.denominator)
    if math.gcd(p, den) != 1:
        raise PreconditionError(f"p = {p} is not prime to det M (solution denominators {den}, det {sols.det})")
    images = []
    for r in sols.solutions:
        img = tuple(frac_part(p * x) for x in r)
        if img not in sols._lookup:
            raise AssertionError("p-action left the solution set")
        images.append(sols.position(img))
    if sorted(images) != list(range(len(images))):
        raise AssertionError("p-action is not a permutation")
    seen = set()
    orbits = []
    for start in range(len(images)):
        if start in seen:
            continue
        members = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            members.append(cur)
            cur = images[cur]
        orbits.append(Orbit(members, [sols.weights[i] for i in members]))
    return StabilityReport(p, sols, orbits, images)


def project_face(vertices: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Drop coordinates on which every face vertex vanishes; columns of M are the vertices."""
    keep = [i for i in range(len(vertices[0])) if any(v[i] for v in vertices)]
    return keep, [[v[i] for v in vertices] for i in keep]


@dataclass
class FaceStability:
    vertices: list[tuple[int, ...]]
    coordinates: list[int]
    report: StabilityReport

    @property
    def stable(self) -> bool:
        return self.report.stable

    def to_dict(self) -> dict:
        d = self.report.to_dict()
        d.update({"vertices": [list(v) for v in self.vertices], "coordinates": self.coordinates,
                  "det": self.report.solutions.det})
        return d


def face_stability(vertices: Sequence[Sequence[int]], p: int, polytope: IntegralPolytope | None = None) -> FaceStability:
    """Stability of the simplex face spanned by ``vertices`` (all of weight 1) under r -> {p r}."""
    vertices = [tuple(v) for v in vertices]
    if polytope is not None:
        for v in vertices:
            if weight(polytope, v, method="facets") != 1:
                raise FaceParametrizationError(f"face vertex {v} does not have weight 1")
    keep, M = project_face(vertices)
    if not M or rank(M) < len(vertices):
        raise FaceParametrizationError("face vertices are linearly dependent after projection")
    sols = unit_box_solve(M)
    return FaceStability(vertices, keep, p_action_orbits(sols, p))


def necessary_condition(p: int, polytope: IntegralPolytope) -> dict:
    D = polytope_denominator(polytope)
    return {"D": D, "p_mod_D": p % D, "congruent": p % D == 1 % D}


# -- facial diagnosis --------------------------------------------------------------------

@dataclass
class FacetDiagnosis:
    vertices: list[tuple[int, ...]]
    normal: tuple[Fraction, ...]
    D: int
    p_mod_D: int
    congruent: bool
    simplex: bool
    diagonal: bool
    checked_faces: list[FaceStability] = field(default_factory=list)

    @property
    def unstable_faces(self) -> list[FaceStability]:
        return [f for f in self.checked_faces if not f.stable]

    @property
    def stable(self) -> bool:
        return self.congruent and not self.unstable_faces

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "normal": [_fmt(x) for x in self.normal],
            "D": self.D,
            "p_mod_D": self.p_mod_D,
            "congruent": self.congruent,
            "simplex": self.simplex,
            "diagonal": self.diagonal,
            "checked_faces": [{"vertices": [list(v) for v in f.vertices], "det": f.report.solutions.det,
                               "stable": f.stable} for f in self.checked_faces],
            "unstable_faces": [f.to_dict() for f in self.unstable_faces],
            "verdict": "stable" if self.stable else "unstable",
        }


@dataclass
class FacialDiagnosis:
    p: int
    facets: list[FacetDiagnosis]

    @property
    def status(self) -> str:
        if any(not f.stable for f in self.facets):
            return "unstable"
        if all(f.simplex for f in self.facets):
            return "stable"
        return "inconclusive"

    @property
    def verdict(self) -> str:
        for f in self.facets:
            if not f.stable:
                if not f.congruent:
                    return f"face {[list(v) for v in f.vertices]} unstable (p = {f.p_mod_D} mod D = {f.D})"
                bad = f.unstable_faces[0]
                return f"face {[list(v) for v in bad.vertices]} unstable"
        if self.status == "stable":
            return "all faces stable"
        return "inconclusive (non-simplex face)"

    def to_dict(self) -> dict:
        return {"p": self.p, "facets": [f.to_dict() for f in self.facets], "status": self.status,
                "verdict": self.verdict, "citations": [FACIAL_CITATION]}


def facial_diagnosis(target, p: int, support: Sequence[Sequence[int]] | None = None) -> FacialDiagnosis:
    """Per-facet congruence and stability of every diagonal face (support = its vertices).

    ``target`` is a polytope or a Laurent polynomial. ``support`` is the set of exponents
    a generic member may use: the exponents of f, or every lattice point of the polytope.
    """
    require_prime(p)
    if isinstance(target, LaurentPolynomial):
        polytope = newton_polytope(target)
        if support is None:
            support = target.exponents
    else:
        polytope = target
    facets = facets_not_containing_origin(polytope)
    if support is None:
        support = lattice_points(polytope)
    support = [tuple(u) for u in support if any(u)]
    out = []
    for facet in facets:
        fverts = frozenset(facet.vertex_indices)
        D = face_denominator(facet)
        coords = [polytope.vertices[i] for i in sorted(fverts)]
        simplex = len(coords) == polytope.dim
        faces = [fverts] + sorted((g for k in range(polytope.dim - 1) for g in polytope.faces[k] if g <= fverts),
                                  key=lambda g: sorted(polytope.vertices[i] for i in g), reverse=True)
        checked = []
        diagonal = False
        for face in faces:
            verts = [polytope.vertices[i] for i in sorted(face)]
            if polytope.face_dimension(face) != len(verts) - 1:
                continue
            eqs = [(f.a, f.b) for f in polytope.facets if face <= set(f.vertex_indices)]
            on_face = set(points_on_face(support, eqs))
            if on_face != set(verts):
                continue
            if face == fverts:
                diagonal = True
            checked.append(face_stability(verts, p) if math.gcd(p, _face_index(verts)) == 1 else None)
        checked = [c for c in checked if c is not None]
        out.append(FacetDiagnosis(coords, facet.normal, D, p % D, p % D == 1 % D, simplex, diagonal, checked))
    return FacialDiagnosis(p, out)


def _face_index(vertices) -> int:
    _, M = project_face(vertices)
    _, S, _ = smith_normal_form(M)
    out = 1
    for i in range(len(vertices)):
        out *= S[i][i]
    return out


# -- counterexample ----------------------------------------------------------------------

@dataclass
class CounterexampleReport:
    n: int
    d: int
    p: int
    D: int
    congruent: bool
    tau: FaceStability
    half_shift_k: list[int]
    unstable_k: list[int]
    geometry: DeligneGeometry
    weight_checks: list[dict]

    @property
    def det(self) -> int:
        return self.tau.report.solutions.det

    @property
    def verdict(self) -> str:
        if self.tau.stable:
            return "no instability found on tau"
        return f"Delta_{self.d} not generically ordinary, Le's conjecture violated"

    def to_dict(self) -> dict:
        d = self.d
        sols = self.tau.report.solutions
        pi1 = [[0, 0, 0], [-1, 0, 0], [1, d, 0], [1, d - 1, 1]]
        return {
            "hypothesis": {
                "n": self.n, "d": self.d, "p": self.p,
                "p_mod_d": self.p % d, "required_p_mod_d": d // 2 + 1,
                "D": self.D, "p_mod_D": self.p % self.D, "p_congruent_1_mod_D": self.congruent,
            },
            "facets": {
                "delta_d": {"vertices": [list(v) for v in self.geometry.facet_vertices(self.geometry.delta_d)],
                            "normal": [_fmt(x) for x in self.geometry.delta_d.normal],
                            "D": face_denominator(self.geometry.delta_d)},
                "delta_d_prime": {"vertices": [list(v) for v in self.geometry.facet_vertices(self.geometry.delta_d_prime)],
                                  "normal": [_fmt(x) for x in self.geometry.delta_d_prime.normal],
                                  "D": face_denominator(self.geometry.delta_d_prime)},
            },
            "tau": {"vertices": [list(v) for v in self.tau.vertices], "coordinates": self.tau.coordinates},
            "M": sols.M,
            "det": self.det,
            "solutions": [{"k": i, "r": [_fmt(x) for x in r], "weight": _fmt(w)}
                          for i, (r, w) in enumerate(zip(sols.solutions, sols.weights))],
            "orbits": self.tau.report.to_dict()["orbits"],
            "unstable_orbits": [{"members": [[_fmt(x) for x in sols.solutions[i]] for i in o.members],
                                 "weights": [_fmt(w) for w in o.weights]}
                                for o in self.tau.report.unstable_orbits()],
            "unstable_k": self.unstable_k,
            "half_shift_k": self.half_shift_k,
            "weight_checks": self.weight_checks,
            "subpolytope_Pi_1": {"vertices": pi1, "role": "contains tau as a face; justification only"},
            "citations": [FACIAL_CITATION, LE_CITATION, BOUNDARY_CITATION],
            "verdict": self.verdict,
        }


def counterexample_driver(d: int, p: int, n: int = 2) -> CounterexampleReport:
    """Instability of tau = [(-1,0,0), (1,d,0)] for n = 2, 4 | d, p = d/2 + 1 (mod d)."""
    if n != 2:
        raise PreconditionError("the counterexample is stated for n = 2")
    if d < 4 or d % 4:
        raise PreconditionError(f"d must be a positive multiple of 4, got {d}")
    if not is_prime(p):
        raise PreconditionError(f"p = {p} is not prime")
    if p % d != d // 2 + 1:
        raise PreconditionError(f"p must satisfy p = d/2 + 1 = {d // 2 + 1} (mod {d}); got p = {p % d} (mod {d})")
    geom = deligne_polytope(n, d)
    D = polytope_denominator(geom.Delta_d)
    tau_vertices = [(-1, 0, 0), (1, d, 0)]
    tau = face_stability(tau_vertices, p, polytope=geom.Delta_d)
    sols = tau.report.solutions
    expected = [(Fraction(k, d), Fraction(k, d)) for k in range(d)]
    if sorted(sols.solutions) != sorted(expected):
        raise AssertionError("solutions of M r = 0 (mod 1) differ from (k/d, k/d)")
    checks = []
    unstable_k, half_shift = [], []
    for k in range(d):
        r = (Fraction(k, d), Fraction(k, d))
        u = tuple(sum(ri * v[c] for ri, v in zip(r, tau_vertices)) for c in range(3))
        w_lp = weight(geom.Delta_d, u, method="lp")
        w_facets = weight(geom.Delta_d, u, method="facets")
        img = tuple(frac_part(p * x) for x in r)
        checks.append({"k": k, "point": [int(x) for x in u], "weight_lp": _fmt(w_lp),
                       "weight_facets": _fmt(w_facets), "weight_expected": _fmt(Fraction(2 * k, d)),
                       "image": [_fmt(x) for x in img], "image_weight": _fmt(sum(img))})
        if not (w_lp == w_facets == Fraction(2 * k, d)):
            raise AssertionError(f"weight of {u} disagrees with 2k/d")
        if sum(img) != sum(r):
            unstable_k.append(k)
        if k % 2 and 2 * k < d:
            if img != (Fraction(k, d) + Fraction(1, 2),) * 2:
                raise AssertionError(f"{{p r}} != k/d + 1/2 for k = {k}")
            half_shift.append(k)
    return CounterexampleReport(n, d, p, D, p % D == 1 % D, tau, half_shift, unstable_k, geom, checks)


# -- sampling ----------------------------------------------------------------------------

def _random_coeff(rng: random.Random, p: int, nonzero: bool) -> int:
    return rng.randrange(1, p) if nonzero else rng.randrange(p)


def sample_family(n: int, d: int, p: int, count: int, seed: int, max_attempts: int = 1000) -> list[LaurentPolynomial]:
    """Members x0*h(x) + g(x) + c/x0 of the family with h Deligne, deg h = d, deg g < d/2."""
    require_prime(p)
    geom = deligne_polytope(n, d)
    rng = random.Random(seed)
    out = []
    monos = [a for a in itertools.product(range(d + 1), repeat=n) if sum(a) <= d]
    g_monos = [a for a in monos if 2 * sum(a) < d]
    for _ in range(count):
        for _attempt in range(max_attempts):
            h_terms = {}
            for a in monos:
                vertex = sum(a) == 0 or (sum(a) == d and max(a) == d)
                h_terms[a] = _random_coeff(rng, p, vertex)
            h = LaurentPolynomial(n, p, h_terms)
            if h.total_degree() == d and deligne_check(h).is_deligne is not False:
                break
        else:
            raise GenerationError(f"no Deligne h found in {max_attempts} attempts")
        terms = {(1,) + a: c for a, c in h.terms.items()}
        for a in g_monos:
            terms[(0,) + a] = (terms.get((0,) + a, 0) + _random_coeff(rng, p, False))
        terms[(-1,) + (0,) * n] = _random_coeff(rng, p, True)
        f = LaurentPolynomial(n + 1, p, terms, first_index=0)
        if newton_polytope(f) != geom.Delta:
            raise AssertionError("sampled polynomial has the wrong Newton polytope")
        out.append(f)
    return out


def sample_polytope_family(polytope: IntegralPolytope, p: int, rng: random.Random) -> LaurentPolynomial:
    """Random f with Newton polytope ``polytope``: all lattice points, vertex coefficients nonzero."""
    verts = set(polytope.vertices)
    terms = {}
    for u in lattice_points(polytope):
        if any(u):
            terms[u] = _random_coeff(rng, p, u in verts)
    return LaurentPolynomial(polytope.dim, p, terms)


@dataclass
class GNPSample:
    p: int
    infimum: LowerConvexPolygon
    trials: list[tuple[LaurentPolynomial, LowerConvexPolygon]]
    hodge: LowerConvexPolygon | None
    label: str = "upper bound for GNP (pointwise minimum of sampled Newton polygons)"

    def to_dict(self) -> dict:
        from .polygon import polygon_to_json
        out = {
            "p": self.p,
            "label": self.label,
            "infimum": polygon_to_json(self.infimum),
            "trials": [{"f": str(f), "newton_polygon": polygon_to_json(np_)} for f, np_ in self.trials],
        }
        if self.hodge is not None:
            out["hodge_polygon"] = polygon_to_json(self.hodge)
            out["comparison"] = polygon_compare(self.infimum, self.hodge).to_dict()
            out["equals_hodge"] = self.infimum == self.hodge
        return out


def gnp_sample(target, p: int, trials: int, seed: int, budget: int = DEFAULT_TORUS_BUDGET, cache=None,
               q_degree: int = 1, witness_degree: int = 1, max_attempts: int = 100) -> GNPSample:
    """Pointwise minimum of Newton polygons over seeded random members of a family.

    ``target`` is an :class:`IntegralPolytope` (the universal family of that polytope)
    or ``(n, d)`` for the Deligne family. Trial t uses seed + t.
    """
    require_prime(p)
    if isinstance(target, IntegralPolytope):
        polytope = target
        n_vars = polytope.dim
    else:
        n, d = target
        polytope = deligne_polytope(n, d).Delta
        n_vars = n + 1
    N = normalized_volume(polytope)
    probe = LaurentPolynomial(n_vars, p, {(1,) * n_vars: 1})
    check_budget(probe, range(1, N + 1), q_degree, budget)
    results = []
    for t in range(trials):
        rng = random.Random(seed + t)
        for _ in range(max_attempts):
            if isinstance(target, IntegralPolytope):
                f = sample_polytope_family(polytope, p, rng)
            else:
                f = sample_family(n, d, p, 1, rng.randrange(2**31))[0]
            if not nondegeneracy_witness_search(f, witness_degree, q_degree, budget).degenerate:
                break
        else:
            raise GenerationError(f"trial {t}: no non-degenerate sample in {max_attempts} attempts")
        L = l_polynomial(f, q_degree, N, budget, cache)
        results.append((f, newton_polygon(L)))
        log.info("trial %d: %s -> %s", t, f, results[-1][1])
    hp = hodge_polygon(polytope) if polytope.contains_origin else None
    return GNPSample(p, pointwise_min([r[1] for r in results]), results, hp)
