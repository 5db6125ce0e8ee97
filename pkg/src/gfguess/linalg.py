"""Exact nullspaces over Q for the undetermined-coefficient fits."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def nullspace(rows: Sequence[Sequence[int | Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel of ``rows`` by Gauss-Jordan elimination.

    Each basis vector has one free variable set to 1 and the others 0.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        prow = [x * inv for x in m[r]]
        m[r] = prow
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            v[pcol] = -m[i][fcol]
        basis.append(v)
    return basis


def lowest_kernel_vector(basis: list[list[Fraction]], priority: Sequence[int]) -> list[Fraction]:
    """The kernel element whose highest-priority nonzero entry is as late as possible.

    ``priority`` lists column indices from most to least expensive (e.g. the
    highest-degree unknowns first). Row-reducing the basis in that column
    order and taking the last echelon row yields the vector that avoids the
    expensive columns the longest, a canonical choice independent of how the
    basis was produced.
    """
    if not basis:
        raise ValueError("empty kernel")
    rows = [[v[c] for c in priority] for v in basis]
    ncols = len(priority)
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    last = rows[r - 1]
    out = [Fraction(0)] * len(basis[0])
    for pos, c in enumerate(priority):
        out[c] = last[pos]
    return out
