"""Exact linear algebra over a field of rational functions (or plain rationals).

Entries may be :class:`RatFunc` or :class:`fractions.Fraction`; the code only
uses field operations and truthiness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .ratfunc import RatFunc


def _copy(M):
    return [list(row) for row in M]


def _echelon(M) -> tuple[list[list], list[tuple[int, int]]]:
    """Fraction-free elimination with leftmost-column, topmost-row pivots.

    Returns the reduced rows (in pivot order) and the list of
    ``(original_row, column)`` pivots.
    """
    rows = _copy(M)
    remaining = list(range(len(rows)))
    ncols = len(rows[0]) if rows else 0
    pivots: list[tuple[int, int]] = []
    prev = None
    for c in range(ncols):
        piv = next((r for r in remaining if rows[r][c]), None)
        if piv is None:
            continue
        remaining.remove(piv)
        p = rows[piv]
        for r in remaining:
            row = rows[r]
            a = row[c]
            if a:
                for j in range(c + 1, ncols):
                    v = p[c] * row[j] - a * p[j]
                    row[j] = v / prev if prev is not None else v
            else:
                if prev is not None:
                    for j in range(c + 1, ncols):
                        if row[j]:
                            row[j] = (p[c] * row[j]) / prev
                else:
                    for j in range(c + 1, ncols):
                        if row[j]:
                            row[j] = p[c] * row[j]
            row[c] = a * 0
        pivots.append((piv, c))
        prev = p[c]
        if not remaining:
            break
    return rows, pivots


def determinant(M):
    """Determinant of a square matrix via fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    rows = _copy(M)
    sign = 1
    prev = None
    for k in range(n):
        piv = next((r for r in range(k, n) if rows[r][k]), None)
        if piv is None:
            return rows[0][0] * 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = rows[k][k] * rows[i][j] - rows[i][k] * rows[k][j]
                rows[i][j] = v / prev if prev is not None else v
        prev = rows[k][k]
    return rows[n - 1][n - 1] if sign > 0 else -rows[n - 1][n - 1]


@dataclass(frozen=True)
class RankResult:
    rank: int
    certificate: object | None
    rows: tuple[int, ...] = ()
    cols: tuple[int, ...] = ()


def generic_rank(M: Sequence[Sequence]) -> RankResult:
    """Rank at a generic point, with a nonzero maximal minor as certificate."""
    if not M or not M[0]:
        return RankResult(0, None)
    _, pivots = _echelon(M)
    if not pivots:
        return RankResult(0, None)
    rows = tuple(sorted(r for r, _ in pivots))
    cols = tuple(c for _, c in pivots)
    sub = [[M[r][c] for c in cols] for r in rows]
    return RankResult(len(pivots), determinant(sub), rows, cols)


@dataclass(frozen=True)
class LinearSolution:
    particular: tuple
    nullspace: tuple[tuple, ...]
    consistent: bool = True


@dataclass(frozen=True)
class Inconsistent:
    """Multipliers ``y`` with ``y·M = 0`` and ``y·b ≠ 0``."""

    multipliers: tuple
    value: object
    consistent: bool = field(default=False)


def rref(M):
    """Reduced row echelon form over the field; returns (rows, pivot columns)."""
    rows = _copy(M)
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivcols: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c] if not isinstance(rows[r][c], RatFunc) else rows[r][c].inverse()
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivcols.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivcols


def solve_linear(M: Sequence[Sequence], b: Sequence, zero=None, one=None):
    """Solve ``M x = b`` exactly.

    Returns a :class:`LinearSolution` (free variables set to zero, plus a
    null-space basis) or an :class:`Inconsistent` certificate.
    """
    nrows = len(M)
    if len(b) != nrows:
        raise ValueError("dimension mismatch")
    ncols = len(M[0]) if nrows else 0
    sample = next((x for row in M for x in row), None)
    if zero is None:
        zero = RatFunc() if isinstance(sample, RatFunc) or sample is None else sample * 0
    if one is None:
        one = zero + 1
    aug = [list(M[i]) + [b[i]] + [one if j == i else zero for j in range(nrows)] for i in range(nrows)]
    rows, pivcols = rref(aug)
    for row, pc in zip(rows, pivcols):
        if pc == ncols:
            return Inconsistent(tuple(row[ncols + 1:]), row[ncols])
        if pc > ncols:
            break
    main = [(row, pc) for row, pc in zip(rows, pivcols) if pc < ncols]
    x = [zero] * ncols
    for row, pc in main:
        x[pc] = row[ncols]
    pivset = {pc for _, pc in main}
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for row, pc in main:
            v[pc] = -row[free]
        basis.append(tuple(v))
    return LinearSolution(tuple(x), tuple(basis))


def nullspace(M: Sequence[Sequence], zero=None, one=None) -> list[tuple]:
    if not M:
        return []
    sol = solve_linear(M, [zero if zero is not None else M[0][0] * 0] * len(M), zero, one)
    return list(sol.nullspace)
