"""Laurent polynomials over F_p and the text grammar used to enter them."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ParseError, ValidationError
from .fields import FieldElement, require_prime

Exponent = tuple[int, ...]

MAX_EXPONENT = 10**6


@dataclass(frozen=True)
class LaurentPolynomial:
    """Map from exponent vectors (negative entries allowed) to nonzero coefficients in F_p.

    ``first_index`` only affects printing: variables are shown as x{first_index}, ...
    """

    n_vars: int
    p: int
    terms: Mapping[Exponent, int]
    first_index: int = field(default=1, compare=False)

    def __post_init__(self):
        clean: dict[Exponent, int] = {}
        for exp, c in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.n_vars:
                raise ValidationError(f"exponent {exp} does not have {self.n_vars} entries")
            clean[exp] = (clean.get(exp, 0) + c) % self.p
        object.__setattr__(self, "terms", {e: c for e, c in sorted(clean.items()) if c})

    def __hash__(self) -> int:
        return hash((self.n_vars, self.p, tuple(self.terms.items())))

    def __str__(self) -> str:
        return format_laurent(self)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def require_nonzero(self) -> LaurentPolynomial:
        if self.is_zero:
            raise ValidationError("zero polynomial")
        return self

    @property
    def exponents(self) -> list[Exponent]:
        return list(self.terms)

    def key(self) -> str:
        """Injective canonical key (prime, variable count, canonical text)."""
        return f"p={self.p};n={self.n_vars};f={format_laurent(self, first_index=1)}"

    def is_polynomial(self) -> bool:
        return all(e >= 0 for exp in self.terms for e in exp)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def homogeneous_part(self, d: int) -> LaurentPolynomial:
        return self.with_terms({e: c for e, c in self.terms.items() if sum(e) == d})

    def restrict(self, support: Iterable[Sequence[int]]) -> LaurentPolynomial:
        """Keep only the monomials whose exponents lie in ``support`` (the face polynomial)."""
        s = {tuple(x) for x in support}
        return self.with_terms({e: c for e, c in self.terms.items() if e in s})

    def with_terms(self, terms: Mapping[Exponent, int]) -> LaurentPolynomial:
        return LaurentPolynomial(self.n_vars, self.p, terms, self.first_index)

    def euler_derivative(self, i: int) -> LaurentPolynomial:
        """x_i * df/dx_i."""
        return self.with_terms({e: c * e[i] for e, c in self.terms.items()})

    def partial(self, i: int) -> LaurentPolynomial:
        """df/dx_i for a genuine polynomial."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                out[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return self.with_terms(out)

    def set_zero(self, variables: Iterable[int]) -> LaurentPolynomial:
        """Substitute x_i = 0 for the given variables (polynomials only)."""
        vs = set(variables)
        return self.with_terms({e: c for e, c in self.terms.items() if all(e[i] == 0 for i in vs)})

    def __call__(self, point: Sequence[FieldElement]) -> FieldElement:
        fld = point[0].field
        total = fld.zero()
        for exp, c in self.terms.items():
            term = fld(c)
            for x, e in zip(point, exp):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def __add__(self, other: LaurentPolynomial) -> LaurentPolynomial:
        if (other.n_vars, other.p) != (self.n_vars, self.p):
            raise ValidationError("incompatible polynomials")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return self.with_terms(terms)


def format_laurent(f: LaurentPolynomial, first_index: int | None = None) -> str:
    base = f.first_index if first_index is None else first_index
    if f.is_zero:
        return "0"
    parts = []
    for exp, c in reversed(list(f.terms.items())):
        factors = []
        for i, e in enumerate(exp):
            if e == 1:
                factors.append(f"x{base + i}")
            elif e:
                factors.append(f"x{base + i}^{e}")
        if c != 1 or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<var>x\d+)|(?P<num>\d+)|(?P<op>[-+*^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            col = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[col]!r}", col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.end = len(text)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end)
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> list[tuple[int, dict[int, int]]]:
        terms = []
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "-":
            self.take()
            sign = -1
        terms.append(self.term(sign))
        while (tok := self.peek()) is not None:
            if tok[0] != "op" or tok[1] not in "+-":
                raise ParseError(f"expected '+' or '-', got {tok[1]!r}", tok[2])
            self.take()
            terms.append(self.term(1 if tok[1] == "+" else -1))
        return terms

    def term(self, sign: int) -> tuple[int, dict[int, int]]:
        coeff = 1
        powers: dict[int, int] = {}
        tok = self.peek()
        if tok and tok[0] == "num":
            self.take()
            coeff = int(tok[1])
        else:
            self.factor(powers)
        while (tok := self.peek()) is not None and tok[0] == "op" and tok[1] == "*":
            self.take()
            self.factor(powers)
        return sign * coeff, powers

    def factor(self, powers: dict[int, int]) -> None:
        _, name, pos = self.take("var")
        if len(name) > 2:
            raise ParseError(f"variable index {name[1:]} > 9", pos)
        idx = int(name[1])
        exp = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            neg = False
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "-":
                self.take()
                neg = True
            _, digits, dpos = self.take("num")
            exp = -int(digits) if neg else int(digits)
            if abs(exp) > MAX_EXPONENT:
                raise ParseError(f"exponent magnitude {abs(exp)} exceeds {MAX_EXPONENT}", dpos)
        powers[idx] = powers.get(idx, 0) + exp


def parse_laurent(text: str, p: int, n_vars: int | None = None, first_index: int | None = None) -> LaurentPolynomial:
    """Parse e.g. ``"x1*x2^3 + x1^3*x2 + x1*x2"``; coefficients are reduced mod p.

    Variables are x1..xn unless x0 occurs (or ``first_index=0``), in which case
    they are x0..x(n-1).
    """
    require_prime(p)
    if not text.strip():
        raise ParseError("empty input", 0)
    raw = _Parser(text).expr()
    used = {i for _, powers in raw for i in powers}
    first = first_index if first_index is not None else (0 if 0 in used else 1)
    if first not in (0, 1):
        raise ValidationError("first_index must be 0 or 1")
    if first == 1 and 0 in used:
        raise ValidationError("x0 used with 1-based variable names")
    top = max(used, default=first)
    n = n_vars if n_vars is not None else max(top - first + 1, 1)
    if used and top - first + 1 > n:
        raise ValidationError(f"x{top} exceeds the declared {n} variables")
    terms: dict[Exponent, int] = {}
    for coeff, powers in raw:
        exp = [0] * n
        for i, e in powers.items():
            exp[i - first] = e
        exp = tuple(exp)
        terms[exp] = terms.get(exp, 0) + coeff
    return LaurentPolynomial(n, p, terms, first)
