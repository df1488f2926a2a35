"""Exact arithmetic in Q(zeta_p) and the valuation at the prime 1 - zeta_p."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import PreconditionError
from .fields import require_prime
from .linalg import det_int, solve_rational

INFINITY = math.inf
MAX_PRIME = 97


def v_p(n: int, p: int) -> int:
    if n == 0:
        return INFINITY
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class CyclotomicNumber:
    """sum a_i zeta^i for i < p - 1, with zeta a primitive p-th root of unity."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Iterable = ()):
        coeffs = [Fraction(c) for c in coeffs]
        # reduce modulo x^p - 1, then eliminate zeta^{p-1} with Phi_p
        full = [Fraction(0)] * p
        for i, c in enumerate(coeffs):
            full[i % p] += c
        top = full[p - 1]
        self.p = p
        self.coeffs = tuple(c - top for c in full[: p - 1])

    @classmethod
    def from_int(cls, p: int, n) -> CyclotomicNumber:
        return cls(p, [n])

    @classmethod
    def zeta(cls, p: int, power: int = 1) -> CyclotomicNumber:
        c = [0] * p
        c[power % p] = 1
        return cls(p, c)

    @classmethod
    def from_counts(cls, p: int, counts: Sequence[int]) -> CyclotomicNumber:
        """sum_c counts[c] * zeta^c."""
        return cls(p, counts)

    # arithmetic
    def _check(self, other) -> CyclotomicNumber:
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_int(self.p, other)
        if not isinstance(other, CyclotomicNumber) or other.p != self.p:
            raise PreconditionError("cyclotomic numbers over different primes")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CyclotomicNumber(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.p, [a * other for a in self.coeffs])
        other = self._check(other)
        out = [Fraction(0)] * (2 * self.p)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return CyclotomicNumber(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = CyclotomicNumber.from_int(self.p, 1)
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scalar_div(self, c) -> CyclotomicNumber:
        c = Fraction(c)
        if c == 0:
            raise ZeroDivisionError("division by zero scalar")
        return CyclotomicNumber(self.p, [a / c for a in self.coeffs])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scalar_div(other)
        return self * self._check(other).inverse()

    def multiplication_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x in the basis 1, zeta, ..., zeta^{p-2} (columns are images)."""
        n = self.p - 1
        cols = [(self * CyclotomicNumber.zeta(self.p, j)).coeffs for j in range(n)]
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        one = [1] + [0] * (self.p - 2)
        return CyclotomicNumber(self.p, solve_rational(self.multiplication_matrix(), one))

    def galois(self, c: int) -> CyclotomicNumber:
        """Image under zeta -> zeta^c."""
        if c % self.p == 0:
            raise PreconditionError("Galois exponent must be prime to p")
        out = [Fraction(0)] * self.p
        for i, a in enumerate(self.coeffs):
            out[i * c % self.p] += a
        return CyclotomicNumber(self.p, out)

    # predicates and comparisons
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.coeffs)

    def denominator(self) -> int:
        return reduce(math.lcm, (a.denominator for a in self.coeffs), 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_int(self.p, other)
        return isinstance(other, CyclotomicNumber) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        terms = []
        for i, a in enumerate(self.coeffs):
            if a:
                terms.append(f"{a}" if i == 0 else f"{a}*z^{i}")
        return f"CyclotomicNumber(p={self.p}: {' + '.join(terms) or '0'})"

    # norms, valuations, embeddings
    def norm(self) -> Fraction:
        """Field norm to Q, i.e. the resultant of Phi_p with the representative polynomial."""
        den = self.denominator()
        mat = [[int(x * den) for x in row] for row in (self * den).multiplication_matrix()]
        return Fraction(det_int(mat), den ** (self.p - 1))

    def complex_value(self, j: int = 1) -> complex:
        z = cmath.exp(2j * cmath.pi * j / self.p)
        return sum(float(a) * z**i for i, a in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"p": self.p, "coeffs": [[a.numerator, a.denominator] for a in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicNumber:
        p = data["p"]
        coeffs = [Fraction(n, d) for n, d in data["coeffs"]]
        if len(coeffs) != p - 1:
            raise ValueError("coefficient vector has wrong length")
        return cls(p, coeffs)


def pi_valuation(a: CyclotomicNumber):
    """v_pi(a) for pi = 1 - zeta_p, computed as v_p(N(a)) for integral a."""
    if not a.is_integral():
        raise PreconditionError("pi_valuation requires an integral cyclotomic number")
    if a.is_zero():
        return INFINITY
    return v_p(int(a.norm()), a.p)


def pi_valuation_by_division(a: CyclotomicNumber, limit: int = 64):
    """Largest m with a in (1 - zeta)^m, by repeated exact division."""
    if a.is_zero():
        return INFINITY
    inv = (1 - CyclotomicNumber.zeta(a.p)).inverse()
    m = 0
    cur = a
    while m < limit:
        nxt = cur * inv
        if not nxt.is_integral():
            return m
        cur = nxt
        m += 1
    return m


def ord_q(a: CyclotomicNumber, a_deg: int = 1):
    """q-adic order for q = p^a_deg, normalized so ord_q(q) = 1; rational inputs allowed."""
    if a.is_zero():
        return INFINITY
    den = a.denominator()
    v = pi_valuation(a * den) - (a.p - 1) * v_p(den, a.p)
    return Fraction(v, (a.p - 1) * a_deg)


def complex_abs(a: CyclotomicNumber, j: int = 1) -> float:
    return abs(a.complex_value(j))


def check_prime(p: int) -> int:
    require_prime(p)
    if p > MAX_PRIME:
        raise PreconditionError(f"p = {p} exceeds the supported bound {MAX_PRIME}")
    return p
