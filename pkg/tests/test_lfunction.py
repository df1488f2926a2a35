import logging

import pytest

from hodgenewton.cache import SumCache
from hodgenewton.cyclotomic import CyclotomicNumber
from hodgenewton.errors import BudgetExceededError, ValidationError
from hodgenewton.hodge import hodge_polygon
from hodgenewton.laurent import parse_laurent
from hodgenewton.lfunction import (
    coefficients_from_power_sums,
    deligne_check,
    l_polynomial,
    newton_polygon,
    newton_polytope,
    nondegeneracy_witness_search,
)
from hodgenewton.polygon import polygon_compare


def test_linear_character():
    L = l_polynomial(parse_laurent("x1", 3))
    assert L.coefficients == [CyclotomicNumber.from_int(3, 1), CyclotomicNumber.from_int(3, -1)]
    assert str(newton_polygon(L)) == "(0,0) (1,0)"


def test_quadratic_gauss_sum():
    L = l_polynomial(parse_laurent("x1^2", 3))
    g = CyclotomicNumber(3, [1, 2])
    one = CyclotomicNumber.from_int(3, 1)
    # L = (1 + g T)(1 - T)
    assert L.coefficients == [one, g - one, -g]
    assert str(newton_polygon(L)) == "(0,0) (1,0) (2,1/2)"


def test_overrun_coefficient_vanishes():
    L = l_polynomial(parse_laurent("x1^2 + x1^-1", 5), overrun_check=True)
    assert L.overrun_zero is True and L.degree == 3


def test_two_variable_sign():
    L = l_polynomial(parse_laurent("x1 + x2 + x1^-1*x2^-1", 2))
    assert L.degree == 3 and L.integral
    np_ = newton_polygon(L)
    rep = polygon_compare(np_, hodge_polygon(newton_polytope(parse_laurent("x1 + x2 + x1^-1*x2^-1", 2))))
    assert rep.lies_above and rep.endpoints_equal


def test_newton_identities_round_trip():
    # one variable: exp(sum S_k T^k / k) with S_k = -(2^k + 3^k) is (1 - 2T)(1 - 3T)
    p = 5
    sums = [CyclotomicNumber.from_int(p, -(2**k + 3**k)) for k in range(1, 3)]
    c = coefficients_from_power_sums(sums, 1)
    assert [x.coeffs[0] for x in c] == [1, -5, 6]


def test_triangle_newton_polygon_p3_small_degree_shape():
    f = parse_laurent("x1*x2^3 + x1^3*x2 + x1*x2", 3)
    P = newton_polytope(f)
    assert set(P.vertices) == {(0, 0), (1, 3), (3, 1)}


def test_budget_refusal():
    f = parse_laurent("x1*x2*x3 + x1^-1", 3)
    with pytest.raises(BudgetExceededError):
        l_polynomial(f, degree=20, budget=10**6)


def test_zero_polynomial_rejected():
    with pytest.raises(ValidationError):
        l_polynomial(parse_laurent("x1 + 2*x1", 3))


def test_cache_round_trip_and_tamper(tmp_path, caplog):
    cache = SumCache(tmp_path)
    f = parse_laurent("x1^2 + x1^-1", 3)
    first = l_polynomial(f, cache=cache)
    files = sorted(tmp_path.glob("*.json"))
    assert len(files) == 3
    second = l_polynomial(f, cache=cache)
    assert [c.to_json() for c in second.power_sums] == [c.to_json() for c in first.power_sums]
    assert cache.get(f.key(), 3, 99) is None
    # flip one byte inside a stored value
    raw = bytearray(files[0].read_bytes())
    i = raw.index(b"coeffs") + 12
    raw[i] = ord("7") if raw[i] != ord("7") else ord("5")
    files[0].write_bytes(bytes(raw))
    with caplog.at_level(logging.WARNING):
        third = l_polynomial(f, cache=cache)
    assert "checksum" in caplog.text or "ignoring" in caplog.text
    assert third.coefficients == first.coefficients


def test_nondegeneracy_witness():
    rep = nondegeneracy_witness_search(parse_laurent("x1^2 + 2*x1*x2 + x2^2", 3), 1)
    assert rep.degenerate
    rep = nondegeneracy_witness_search(parse_laurent("x1*x2^3 + x1^3*x2 + x1*x2", 5), 1)
    assert not rep.degenerate


@pytest.mark.parametrize("text,p,expected", [
    ("x1^3 + x2^3", 7, True),
    ("x1^2 + 2*x1*x2 + x2^2", 3, False),   # (x1 + x2)^2
    ("x1^3 + x1", 3, False),               # p | d
    ("x1^2 + x1", 3, True),
    ("x1*x2", 5, True),
    ("x1^2", 5, False),                    # double root at infinity for x2
])
def test_deligne_check(text, p, expected):
    h = parse_laurent(text, p, n_vars=2 if text == "x1^2" else None)
    assert deligne_check(h).is_deligne is expected


def test_deligne_three_variables_witness():
    # x1*x2*x3 + x1^3 is singular at (0:1:0); the Fermat cubic has no singular point to find
    assert deligne_check(parse_laurent("x1*x2*x3 + x1^3", 5)).is_deligne is False
    assert deligne_check(parse_laurent("x1^3 + x2^3 + x3^3", 7)).is_deligne is None
