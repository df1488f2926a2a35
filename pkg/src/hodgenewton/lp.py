"""Exact rational simplex method (two phases, Bland's rule)."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Unbounded(Exception):
    pass


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = 1 / tab[r][c]
    tab[r] = [x * inv for x in tab[r]]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [x - f * y for x, y in zip(row, tab[r])]
    basis[r] = c


def _run(tab, basis, cost, allowed) -> None:
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            red = cost[j] - sum(cost[b] * tab[i][j] for i, b in enumerate(basis))
            if red < 0:
                entering = j
                break
        if entering is None:
            return
        best = None
        for i, row in enumerate(tab):
            if row[entering] > 0:
                key = (row[-1] / row[entering], basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            raise Unbounded
        _pivot(tab, basis, best[1], entering)


def minimize(c: Sequence, a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, list[Fraction]] | None:
    """Minimize ``c.x`` subject to ``A x = b``, ``x >= 0``.

    Returns ``(value, x)`` or ``None`` when infeasible. Raises :class:`Unbounded`.
    """
    n = len(c)
    m = len(a)
    rows = []
    for row, rhs in zip(a, b):
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row, rhs = [-x for x in row], -rhs
        rows.append((row, rhs))
    tab = [row + [Fraction(int(i == k)) for k in range(m)] + [rhs] for i, (row, rhs) in enumerate(rows)]
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(1)] * m
    _run(tab, basis, phase1, range(n + m))
    if sum(tab[i][-1] for i, bv in enumerate(basis) if bv >= n) != 0:
        return None
    # drive remaining (zero-level) artificials out of the basis
    i = 0
    while i < len(tab):
        if basis[i] >= n:
            j = next((j for j in range(n) if tab[i][j] != 0), None)
            if j is None:
                del tab[i]
                del basis[i]
                continue
            _pivot(tab, basis, i, j)
        i += 1
    tab = [row[:n] + [row[-1]] for row in tab]
    cost = [Fraction(x) for x in c]
    _run(tab, basis, cost, range(n))
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        x[bv] = tab[i][-1]
    return sum(ci * xi for ci, xi in zip(cost, x)), x
