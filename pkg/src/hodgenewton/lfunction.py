"""L-polynomials of Laurent polynomials from brute-force power sums, their Newton polygons,
and the non-degeneracy and Deligne checks."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from .cache import SumCache
from .cyclotomic import CyclotomicNumber, ord_q
from .errors import ValidationError
from .expsums import check_budget, exp_sum_torus
from .fields import DEFAULT_TORUS_BUDGET, ExtensionField, poly_derivative, poly_gcd, torus_points
from .laurent import LaurentPolynomial
from .polygon import LowerConvexPolygon, lower_hull
from .polytope import IntegralPolytope, hull, normalized_volume

log = logging.getLogger(__name__)


def newton_polytope(f: LaurentPolynomial) -> IntegralPolytope:
    f.require_nonzero()
    return hull([(0,) * f.n_vars] + f.exponents, f.n_vars)


@dataclass
class LPolynomial:
    p: int
    q_degree: int
    n_vars: int
    f_key: str
    coefficients: list[CyclotomicNumber]
    power_sums: list[CyclotomicNumber] = field(repr=False)
    overrun_zero: bool | None = None

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def sign_exponent(self) -> int:
        return (-1) ** (self.n_vars - 1)

    @property
    def integral(self) -> bool:
        return all(c.is_integral() for c in self.coefficients)

    def to_json(self) -> dict:
        return {
            "f": self.f_key,
            "q": self.p**self.q_degree,
            "N": self.degree,
            "sign_exponent": self.sign_exponent,
            "integral": self.integral,
            "coefficients": [c.to_json() for c in self.coefficients],
        }


def power_sums(f: LaurentPolynomial, count: int, q_degree: int = 1, budget: int = DEFAULT_TORUS_BUDGET,
               cache: SumCache | None = None, method: str = "auto") -> list[CyclotomicNumber]:
    """S_1, ..., S_count over F_{q^k}^*, checked against the budget before any work starts."""
    check_budget(f, range(1, count + 1), q_degree, budget)
    q = f.p**q_degree
    out = []
    for k in range(1, count + 1):
        value = cache.get(f.key(), q, k) if cache else None
        if value is None:
            value = exp_sum_torus(f, k, q_degree, budget, method)
            if cache:
                cache.put(f.key(), q, k, value)
        out.append(value)
    return out


def coefficients_from_power_sums(sums: list[CyclotomicNumber], n_vars: int) -> list[CyclotomicNumber]:
    """Coefficients of exp(sum u_k T^k / k) with u_k = (-1)^{n-1} S_k."""
    p = sums[0].p
    sign = (-1) ** (n_vars - 1)
    u = [s * sign for s in sums]
    c = [CyclotomicNumber.from_int(p, 1)]
    for m in range(1, len(sums) + 1):
        acc = CyclotomicNumber.from_int(p, 0)
        for j in range(1, m + 1):
            acc = acc + u[j - 1] * c[m - j]
        c.append(acc.scalar_div(m))
    return c


def l_polynomial(f: LaurentPolynomial, q_degree: int = 1, degree: int | None = None,
                 budget: int = DEFAULT_TORUS_BUDGET, cache: SumCache | None = None,
                 overrun_check: bool = False, method: str = "auto") -> LPolynomial:
    f.require_nonzero()
    if degree is None:
        degree = normalized_volume(newton_polytope(f))
    if degree < 1:
        raise ValidationError("Newton polytope is degenerate; the L-polynomial degree is 0")
    count = degree + 1 if overrun_check else degree
    sums = power_sums(f, count, q_degree, budget, cache, method)
    coeffs = coefficients_from_power_sums(sums, f.n_vars)
    overrun = None
    if overrun_check:
        overrun = coeffs[degree + 1].is_zero()
        coeffs = coeffs[: degree + 1]
        sums = sums[:degree]
    lpoly = LPolynomial(f.p, q_degree, f.n_vars, f.key(), coeffs, sums, overrun)
    if not lpoly.integral:
        log.warning("L-polynomial of %s has non-integral coefficients (f degenerate?)", f)
    return lpoly


def newton_polygon(lpoly: LPolynomial) -> LowerConvexPolygon:
    return lower_hull((i, ord_q(c, lpoly.q_degree)) for i, c in enumerate(lpoly.coefficients))


# -- non-degeneracy ---------------------------------------------------------------------

@dataclass
class WitnessReport:
    searched: int
    witness: dict | None = None

    @property
    def degenerate(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "searched_up_to_degree": self.searched,
            "witness": self.witness,
            "conclusion": "degenerate" if self.witness else f"no witness up to degree {self.searched}",
        }


def faces_avoiding_origin(p: IntegralPolytope) -> list[tuple[frozenset[int], list]]:
    """Faces not containing 0, each with the facet equations that cut it out."""
    out = []
    for k in range(p.dim):
        for face in p.faces[k]:
            eqs = [(f.a, f.b) for f in p.facets if face <= set(f.vertex_indices)]
            if all(b == 0 for _, b in eqs):
                continue
            out.append((face, eqs))
    return out


def points_on_face(points, eqs) -> list:
    return [u for u in points if all(sum(x * y for x, y in zip(a, u)) == b for a, b in eqs)]


def nondegeneracy_witness_search(f: LaurentPolynomial, max_degree: int = 1, q_degree: int = 1,
                                 budget: int = DEFAULT_TORUS_BUDGET) -> WitnessReport:
    """Look for a torus point where all x_i df^tau/dx_i vanish, for faces tau avoiding 0.

    A witness proves degeneracy; an empty search is inconclusive.
    """
    poly = newton_polytope(f)
    if poly.degenerate:
        raise ValidationError("Newton polytope is not full-dimensional")
    faces = faces_avoiding_origin(poly)
    for k in range(1, max_degree + 1):
        fld = ExtensionField(f.p, q_degree * k)
        for face, eqs in faces:
            ftau = f.restrict(points_on_face(f.exponents, eqs))
            derivs = [ftau.euler_derivative(i) for i in range(f.n_vars)]
            for pt in torus_points(fld, f.n_vars, budget):
                if all(d.is_zero or not d(pt) for d in derivs):
                    return WitnessReport(max_degree, {
                        "face": [list(poly.vertices[i]) for i in sorted(face)],
                        "point": [list(x.vector()) for x in pt],
                        "field_degree": q_degree * k,
                    })
    return WitnessReport(max_degree)


# -- Deligne polynomials ----------------------------------------------------------------

@dataclass
class DeligneReport:
    is_deligne: bool | None
    method: str
    detail: str

    def to_dict(self) -> dict:
        return {"is_deligne": self.is_deligne, "method": self.method, "detail": self.detail}


def deligne_check(h: LaurentPolynomial, max_degree: int = 1) -> DeligneReport:
    """Is p prime to deg h, with the leading form of h a smooth projective hypersurface?

    Exact for two variables (squarefree binary form); witness search beyond.
    """
    h.require_nonzero()
    if not h.is_polynomial():
        raise ValidationError("Deligne check needs a polynomial")
    d = h.total_degree()
    p = h.p
    if d < 1:
        return DeligneReport(False, "exact", "constant polynomial")
    top = h.homogeneous_part(d)
    n = h.n_vars
    if d % p == 0:
        return DeligneReport(False, "exact", f"degree {d} divisible by p")
    if n == 1:
        return DeligneReport(True, "exact", f"degree {d} prime to p")
    if n == 2:
        dehom = [0] * (d + 1)
        for (a, _), c in top.terms.items():
            dehom[a] = c
        from .fields import trim
        F = trim(dehom, p)
        at_infinity = d - (len(F) - 1)
        g = poly_gcd(F, poly_derivative(F, p), p)
        if at_infinity > 1:
            return DeligneReport(False, "exact", f"root of multiplicity {at_infinity} at infinity")
        if len(g) > 1:
            return DeligneReport(False, "exact", f"repeated factor {g} in the leading form")
        return DeligneReport(True, "exact", "leading binary form is squarefree")
    partials = [top.partial(i) for i in range(n)]
    for k in range(1, max_degree + 1):
        fld = ExtensionField(p, k)
        for pt in _projective_points(fld, n):
            if all(g.is_zero or not g(pt) for g in [top] + partials):
                return DeligneReport(False, "witness", f"singular point {[list(x.vector()) for x in pt]} over F_{p}^{k}")
    return DeligneReport(None, "witness", f"no singular point found up to degree {max_degree}")


def _projective_points(fld: ExtensionField, n: int):
    elems = list(fld.elements())
    for lead in range(n):
        for rest in itertools.product(elems, repeat=n - lead - 1):
            yield tuple([fld.zero()] * lead + [fld.one()] + list(rest))
