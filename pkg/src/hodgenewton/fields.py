"""Prime fields, extension fields F_{p^m}, traces, and torus enumeration.

Polynomials over F_p are lists of ints, lowest degree first, with no trailing zeros
(``[]`` is the zero polynomial).
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from .errors import BudgetExceededError, PreconditionError

Poly = list[int]

DEFAULT_TORUS_BUDGET = 2**28


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    return p


# -- polynomial arithmetic over F_p ------------------------------------------------

def trim(a: Sequence[int], p: int) -> Poly:
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    return poly_add(a, [-x for x in b], p)


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out, p)


def poly_divmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = trim(a, p)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = trim(a, p)
    return trim(q, p), a


def poly_mod(a: Poly, b: Poly, p: int) -> Poly:
    return poly_divmod(a, b, p)[1]


def poly_gcd(a: Poly, b: Poly, p: int) -> Poly:
    a, b = trim(a, p), trim(b, p)
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def poly_powmod(a: Poly, e: int, m: Poly, p: int) -> Poly:
    result: Poly = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def poly_derivative(a: Poly, p: int) -> Poly:
    return trim([i * a[i] for i in range(1, len(a))], p)


def is_irreducible(f: Poly, p: int) -> bool:
    """Rabin-style test: gcd(x^{p^i} - x, f) = 1 for 1 <= i <= deg f / 2."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    xp: Poly = [0, 1]
    for _ in range(m // 2):
        xp = poly_powmod(xp, p, f, p)
        if len(poly_gcd(poly_sub(xp, [0, 1], p), f, p)) > 1:
            return False
    return True


def _monic_candidates(p: int, m: int) -> Iterator[Poly]:
    for n in range(p**m):
        low = []
        for _ in range(m):
            n, r = divmod(n, p)
            low.append(r)
        yield low + [1]


@lru_cache(maxsize=None)
def _find_irreducible(p: int, m: int) -> tuple[int, ...]:
    for f in _monic_candidates(p, m):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("unreachable")


def find_irreducible(p: int, m: int) -> Poly:
    """Lexicographically smallest monic irreducible polynomial of degree m over F_p."""
    if m < 1:
        raise PreconditionError("degree must be at least 1")
    return list(_find_irreducible(require_prime(p), m))


@lru_cache(maxsize=None)
def _find_primitive(p: int, m: int) -> tuple[int, ...]:
    order = p**m - 1
    factors = prime_factors(order)
    for f in _monic_candidates(p, m):
        if not is_irreducible(f, p):
            continue
        if poly_mod([0, 1], f, p) == []:
            continue
        if all(poly_powmod([0, 1], order // r, f, p) != [1] for r in factors):
            return tuple(f)
    raise AssertionError("unreachable")


def find_primitive(p: int, m: int) -> Poly:
    """Lexicographically smallest primitive polynomial of degree m (x generates F_{p^m}^*)."""
    return list(_find_primitive(require_prime(p), m))


# -- extension fields -----------------------------------------------------------

class ExtensionField:
    """F_{p^m} = F_p[x]/(modulus)."""

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        self.p = require_prime(p)
        self.m = m
        self.modulus = list(modulus) if modulus is not None else find_irreducible(p, m)
        if len(self.modulus) != m + 1 or self.modulus[-1] != 1:
            raise PreconditionError("modulus must be monic of the field degree")
        if not is_irreducible(self.modulus, p):
            raise PreconditionError(f"modulus {self.modulus} is reducible over F_{p}")

    @property
    def order(self) -> int:
        return self.p**self.m

    def __repr__(self) -> str:
        return f"ExtensionField(p={self.p}, m={self.m}, modulus={self.modulus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ExtensionField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, tuple(self.modulus)))

    def __call__(self, value) -> FieldElement:
        if isinstance(value, int):
            return FieldElement(self, (value,))
        return FieldElement(self, value)

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def gen(self) -> FieldElement:
        return self([0, 1])

    def elements(self) -> Iterator[FieldElement]:
        """All elements, in lexicographic order of coefficient vectors (c_0, ..., c_{m-1})."""
        for c in itertools.product(range(self.p), repeat=self.m):
            yield FieldElement(self, c[::-1])

    def trace(self, e: FieldElement) -> int:
        """Tr(e) = e + e^p + ... + e^{p^{m-1}} as an element of F_p."""
        total = self.zero()
        cur = e
        for _ in range(self.m):
            total = total + cur
            cur = cur ** self.p
        c = total.coeffs
        if len(c) > 1:
            raise AssertionError("trace left the prime field")
        return c[0] if c else 0

    def coefficient_string(self) -> str:
        return ",".join(map(str, self.modulus))


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: ExtensionField, coeffs: Sequence[int]):
        self.field = field
        c = trim(coeffs, field.p)
        if len(c) > field.m:
            c = poly_mod(c, field.modulus, field.p)
        self.coeffs = tuple(c)

    def vector(self) -> tuple[int, ...]:
        return self.coeffs + (0,) * (self.field.m - len(self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElement({list(self.vector())})"

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field(other)
        return isinstance(other, FieldElement) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, int):
            return self.field(other)
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.field, poly_add(list(self.coeffs), list(other.coeffs), self.field.p))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        f = self.field
        return FieldElement(f, poly_mod(poly_mul(list(self.coeffs), list(other.coeffs), f.p), f.modulus, f.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        f = self.field
        if e < 0:
            return self.inverse() ** (-e)
        return FieldElement(f, poly_powmod(list(self.coeffs), e, f.modulus, f.p))

    def inverse(self) -> FieldElement:
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def frobenius(self) -> FieldElement:
        return self ** self.field.p


def torus_points(field: ExtensionField, n: int, budget: int = DEFAULT_TORUS_BUDGET) -> Iterator[tuple[FieldElement, ...]]:
    """All n-tuples of nonzero field elements in lexicographic order."""
    required = (field.order - 1) ** n
    if required > budget:
        raise BudgetExceededError(
            f"torus enumeration needs {required} points, budget is {budget}", required, budget)
    units = [e for e in field.elements() if e]
    return itertools.product(units, repeat=n)
