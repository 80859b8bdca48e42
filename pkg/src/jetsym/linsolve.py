"""Exact rational Gaussian elimination (no pivot tolerances: no floats)."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional


def solve(a: list[list[Fraction]], b: list[Fraction]) -> Optional[list[Fraction]]:
    """A particular solution of A x = b over the rationals, with free
    variables fixed to zero; None when the system is inconsistent."""
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(v) for v in row] + [Fraction(b[i])]
            for i, row in enumerate(a)]
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][n]:
            return None
    x = [Fraction(0)] * n
    for pr, pc in pivots:
        x[pc] = rows[pr][n]
    return x


def rank(a: list[list[Fraction]]) -> int:
    m = len(a)
    n = len(a[0]) if m else 0
    rows = [[Fraction(v) for v in row] for row in a]
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(r + 1, m):
            if rows[i][c]:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r
