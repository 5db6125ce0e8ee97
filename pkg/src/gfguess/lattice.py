"""Exact LLL reduction and algdep-style minimal polynomial detection.

The reduction is the integral variant of LLL: Gram-Schmidt data is kept as
integers ``d_i`` (Gram determinants) and ``lam[i][j] = d_j * mu[i][j]``, so no
fractions or floats appear at any point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .exceptions import DependentRows
from .numerics import Fixed, fixed_pow, primitive_part

IntMatrix = list[list[int]]
IntPolynomial = tuple[int, ...]

DEFAULT_DELTA = Fraction(3, 4)
DEFAULT_SLACK = 20


class LLLReduction(NamedTuple):
    basis: IntMatrix
    transform: IntMatrix  # transform @ input == basis


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _check_shape(basis: Sequence[Sequence[int]]) -> IntMatrix:
    rows = [[int(x) for x in row] for row in basis]
    if not rows:
        raise ValueError("empty basis")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("rows of unequal length")
    if len(rows) > width:
        raise DependentRows(f"{len(rows)} rows in dimension {width} cannot be independent")
    return rows


def lll(basis: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> LLLReduction:
    """LLL-reduce the rows of ``basis`` with Lovasz parameter ``delta``.

    Returns the reduced basis together with the unimodular matrix mapping the
    input rows onto it. Raises :class:`DependentRows` on rank-deficient input.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie in (1/4, 1)")
    b = _check_shape(basis)
    n = len(b)
    H = [[int(i == j) for j in range(n)] for i in range(n)]
    dn, dd = delta.numerator, delta.denominator

    d = [0] * (n + 1)  # d[0] = 1, d[i+1] = Gram determinant of first i+1 rows
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def gram_schmidt_row(k):
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise DependentRows(f"row {k} lies in the span of the previous rows")
                d[k + 1] = u

    def reduce_pair(k, l):
        # size-reduce b[k] against b[l]
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
        b[k] = [x - q * y for x, y in zip(b[k], b[l])]
        H[k] = [x - q * y for x, y in zip(H[k], H[l])]
        lam[k][l] -= q * d[l + 1]
        for i in range(l):
            lam[k][i] -= q * lam[l][i]

    def swap(k, kmax):
        b[k], b[k - 1] = b[k - 1], b[k]
        H[k], H[k - 1] = H[k - 1], H[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    gram_schmidt_row(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram_schmidt_row(k)
        while True:
            reduce_pair(k, k - 1)
            # Lovasz: d_{k+1} d_{k-1} >= delta d_k^2 - lam^2, scaled by dd
            if dd * d[k + 1] * d[k - 1] < dn * d[k] * d[k] - dd * lam[k][k - 1] ** 2:
                swap(k, kmax)
                k = max(1, k - 1)
            else:
                break
        for l in range(k - 2, -1, -1):
            reduce_pair(k, l)
        k += 1
    return LLLReduction(b, H)


def gram_schmidt(basis: Sequence[Sequence[int]]) -> tuple[list[list[Fraction]], list[Fraction]]:
    """Plain rational Gram-Schmidt: (mu matrix, squared norms of b*_i)."""
    n = len(basis)
    star: list[list[Fraction]] = []
    norms: list[Fraction] = []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(basis):
        v = [Fraction(x) for x in row]
        for j in range(i):
            mu[i][j] = sum((Fraction(x) * y for x, y in zip(row, star[j])), Fraction(0)) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
        star.append(v)
        norms.append(sum((x * x for x in v), Fraction(0)))
    return mu, norms


def is_lll_reduced(basis: Sequence[Sequence[int]], delta: Fraction = DEFAULT_DELTA) -> bool:
    """Independent check of size reduction and the Lovasz condition."""
    mu, norms = gram_schmidt(basis)
    n = len(basis)
    for i in range(n):
        for j in range(i):
            if abs(mu[i][j]) > Fraction(1, 2):
                return False
    for k in range(1, n):
        if norms[k] < (Fraction(delta) - mu[k][k - 1] ** 2) * norms[k - 1]:
            return False
    return True


class ResidualCheck(NamedTuple):
    passed: bool
    residual: Fixed  # P(alpha) at alpha's scale


def residual_check(P: Sequence[int], alpha: Fixed, slack_digits: int = DEFAULT_SLACK) -> ResidualCheck:
    """Does ``|P(alpha)| <= H(P) * 10**-(p - slack_digits)`` hold at alpha's scale?"""
    p = alpha.scale
    total = sum(c * fixed_pow(alpha, i, p).mantissa for i, c in enumerate(P))
    height = max((abs(c) for c in P), default=0)
    passed = abs(total) <= height * 10**slack_digits
    return ResidualCheck(passed, Fixed(total, p))


def _height_ok(P: Sequence[int], dim: int, p: int, slack_digits: int) -> bool:
    # A chance short vector of the dim-row lattice has height near 10**(p/dim);
    # genuine relations must sit well below that.
    height = max(abs(c) for c in P)
    return height**dim * 10**slack_digits <= 10**p


def _relation(alpha: Fixed, deg: int, weight: int, slack_digits: int, delta: Fraction) -> Optional[IntPolynomial]:
    p = alpha.scale
    dim = deg + 1
    rows = []
    for i in range(dim):
        row = [0] * dim
        row[i] = 1
        row.append(weight * fixed_pow(alpha, i, p).mantissa)
        rows.append(row)
    reduced = lll(rows, delta).basis

    def key(row):
        poly = row[:dim]
        top = max((i for i, c in enumerate(poly) if c), default=-1)
        return (sum(x * x for x in row), top, max(abs(c) for c in poly))

    candidates = [r for r in reduced if any(r[:dim])]
    best = min(candidates, key=key)
    _, prim = primitive_part(best[:dim])
    if len(prim) < 2:
        return None
    if not residual_check(prim, alpha, slack_digits).passed:
        return None
    if not _height_ok(prim, dim, p, slack_digits):
        return None
    return prim


def algdep(
    alpha: Fixed,
    max_deg: int,
    weight: int = 1,
    slack_digits: int = DEFAULT_SLACK,
    delta: Fraction = DEFAULT_DELTA,
) -> Optional[IntPolynomial]:
    """Integer polynomial of degree <= max_deg that ``alpha`` appears to be a root of.

    Degrees are tried in increasing order so the result is the minimal
    relation rather than a multiple of it. At degree d, row i of the lattice
    is the i-th unit vector followed by ``weight * round(10**p * alpha**i)``
    and the shortest reduced row gives the candidate. It is accepted if it
    passes the residual test and is short enough to be told apart from a
    chance lattice vector at this precision. Returned primitive, ascending,
    with a positive lowest-order coefficient; ``None`` if no degree works.
    """
    if max_deg < 1:
        raise ValueError("max_deg must be at least 1")
    for deg in range(1, max_deg + 1):
        found = _relation(alpha, deg, weight, slack_digits, delta)
        if found is not None:
            return found
    return None
