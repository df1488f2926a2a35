"""Exact integer and rational linear algebra for small matrices."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def det_int(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free (Bareiss) elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, m):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def affine_dimension(points: Sequence[Sequence[int]]) -> int:
    if not points:
        return -1
    base = points[0]
    return rank([[x - y for x, y in zip(p, base)] for p in points[1:]]) if len(points) > 1 else 0


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def hyperplane_normal(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer normal to the affine hull of ``n`` points in Z^n (generalized cross product).

    Returns the zero vector when the points are affinely dependent.
    """
    n = len(points[0])
    base = points[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    normal = []
    for i in range(n):
        minor = [row[:i] + row[i + 1:] for row in diffs]
        normal.append((-1) ** i * det_int(minor))
    return primitive(normal)


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve a square system exactly; ``None`` when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n] for row in m]


def smith_normal_form(mat: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form of an integer matrix (rows x cols).

    Returns ``(U, S, V)`` with ``U @ mat @ V == S``, ``U`` and ``V`` unimodular and
    ``S`` diagonal with nonnegative entries, each dividing the next.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    s = [list(map(int, r)) for r in mat]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        s[dst] = [x + f * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in s:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(s[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if s[i][j]]
            if not entries:
                return u, s, v
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, rows):
                add_row(i, t, -(s[i][t] // s[t][t]))
                clean = clean and not s[i][t]
            for j in range(t + 1, cols):
                add_col(j, t, -(s[t][j] // s[t][t]))
                clean = clean and not s[t][j]
            if not clean:
                continue
            # divisibility: fold an offending row into row t and repeat
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if s[i][j] % s[t][t]), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return u, s, v


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]
