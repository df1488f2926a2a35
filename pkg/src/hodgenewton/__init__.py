"""Hodge and Newton polygons of exponential sums, with ordinarity diagnostics for Deligne polytopes."""
from .errors import (
    BudgetExceededError,
    HodgeNewtonError,
    InternalInconsistencyError,
    ParseError,
    PreconditionError,
    ValidationError,
)
from .hodge import hodge_numbers, hodge_polygon
from .laurent import LaurentPolynomial, parse_laurent
from .lfunction import l_polynomial, newton_polygon, newton_polytope
from .ordinarity import (
    counterexample_driver,
    deligne_polytope,
    facial_diagnosis,
    gnp_sample,
    unit_box_solve,
    p_action_orbits,
)
from .polygon import LowerConvexPolygon, polygon_compare
from .polytope import IntegralPolytope, hull, polytope_denominator, weight

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "HodgeNewtonError",
    "IntegralPolytope",
    "InternalInconsistencyError",
    "LaurentPolynomial",
    "LowerConvexPolygon",
    "ParseError",
    "PreconditionError",
    "ValidationError",
    "counterexample_driver",
    "deligne_polytope",
    "facial_diagnosis",
    "gnp_sample",
    "hodge_numbers",
    "hodge_polygon",
    "hull",
    "l_polynomial",
    "newton_polygon",
    "newton_polytope",
    "p_action_orbits",
    "parse_laurent",
    "polygon_compare",
    "polytope_denominator",
    "unit_box_solve",
    "weight",
]
