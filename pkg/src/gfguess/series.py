"""Truncated power series over Q and high-precision evaluation at z = 1/m."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Optional

from .exceptions import DivergenceSuspected, NonSimpleRoot, NoRoot
from .numerics import Fixed, Poly, rat_to_fixed
from .recurrence import PRecurrence, TermSequence

if TYPE_CHECKING:
    from .reconstruct import BivariatePoly

GUARD_DIGITS = 10
STABLE_TERMS = 5


@dataclass(frozen=True)
class TruncatedSeries:
    """``c_0 + c_1 z + ... + c_{N-1} z^{N-1} + O(z^N)``.

    ``order`` is N; coefficients beyond it are unknown and never reported.
    """

    coeffs: tuple[Fraction, ...]
    order: int

    def __init__(self, coeffs: Iterable = (), order: Optional[int] = None):
        c = [Fraction(x) for x in coeffs]
        if order is None:
            order = len(c)
        if order < 0:
            raise ValueError("negative truncation order")
        c = c[:order] + [Fraction(0)] * max(0, order - len(c))
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "order", order)

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "TruncatedSeries":
        return cls(p.coeffs[:order], order)

    def __getitem__(self, k: int) -> Fraction:
        if k >= self.order:
            raise IndexError(f"coefficient {k} is beyond truncation order {self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.coeffs, min(order, self.order))

    def valuation(self) -> int:
        """z-adic valuation; equals ``order`` for a series known to be zero."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return self.order

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        n = min(self.order, other.order)
        return TruncatedSeries((a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])), n)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries((-a for a in self.coeffs), self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        return TruncatedSeries((c * a for a in self.coeffs), self.order)

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        return mul_trunc(self, other)

    __rmul__ = __mul__

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by ``z**k`` (the known order grows by ``k``)."""
        return TruncatedSeries([Fraction(0)] * k + list(self.coeffs), self.order + k)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse by Newton iteration; needs ``c_0 != 0``."""
        if self.order == 0:
            return self
        if not self.coeffs[0]:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv = TruncatedSeries([1 / self.coeffs[0]], 1)
        prec = 1
        two = TruncatedSeries([2], self.order)
        while prec < self.order:
            prec = min(2 * prec, self.order)
            a = self.truncate(prec)
            inv = TruncatedSeries(inv.coeffs, prec)
            inv = inv * (two.truncate(prec) - a * inv)
        return inv

    def __str__(self) -> str:
        from .numerics import format_poly

        body = format_poly(self.coeffs, "z")
        return f"{body} + O(z^{self.order})"


def from_sequence(seq: TermSequence | Iterable) -> TruncatedSeries:
    """Ordinary generating function of the supplied terms."""
    terms = seq.terms if isinstance(seq, TermSequence) else list(seq)
    return TruncatedSeries(terms, len(terms))


def add_trunc(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def scale_trunc(a: TruncatedSeries, c) -> TruncatedSeries:
    return a.scale(c)


def mul_trunc(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, valid up to the smaller of the two orders."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * n
    for i in range(n):
        ai = ac[i]
        if not ai:
            continue
        for j in range(n - i):
            if bc[j]:
                out[i + j] += ai * bc[j]
    return TruncatedSeries(out, n)


def pow_trunc(a: TruncatedSeries, k: int) -> TruncatedSeries:
    """``a**k`` by repeated squaring."""
    if k < 0:
        raise ValueError("negative power")
    result = TruncatedSeries([1], a.order)
    base = a
    while k:
        if k & 1:
            result = mul_trunc(result, base)
        k >>= 1
        if k:
            base = mul_trunc(base, base)
    return result


def _ratio_ok(a_n: Fraction, last_nonzero: Optional[tuple[int, Fraction]], n: int, m: int) -> bool:
    # |a_n / a_j|^(1/(n-j)) / m < 1/2, kept in exact integer form
    if a_n == 0:
        return True
    if last_nonzero is None:
        return False
    j, a_j = last_nonzero
    gap = n - j
    return 2**gap * abs(a_n) < m**gap * abs(a_j)


def partial_sum_at_inverse_int(
    rec: PRecurrence,
    m: int,
    p: int,
    guard_digits: int = GUARD_DIGITS,
    stable_terms: int = STABLE_TERMS,
    term_cap: Optional[int] = None,
) -> tuple[Fraction, int]:
    """Exact partial sum of ``sum a_n m^-n`` and the number of terms used.

    Summation stops once ``stable_terms`` consecutive terms are all below
    ``10**-(p + guard_digits)`` in size while the local growth ratio stays
    under ``m/2``. Under the ratio bound the neglected tail is at most twice
    the last term, far below ``10**-p``.
    """
    if m < 2:
        raise ValueError("m must be at least 2")
    if p < 1:
        raise ValueError("precision must be positive")
    if term_cap is None:
        term_cap = 100 * p
    threshold = 10 ** (p + guard_digits)
    total = Fraction(0)
    m_pow = 1
    streak = 0
    last_nonzero: Optional[tuple[int, Fraction]] = None
    for n, a_n in enumerate(rec.iter_terms()):
        if n >= term_cap:
            raise DivergenceSuspected(
                f"no convergence after {term_cap} terms at m={m}; growth rate too close to m"
            )
        if a_n:
            total += Fraction(a_n.numerator, a_n.denominator * m_pow)
        small = abs(a_n.numerator) * threshold < m_pow * a_n.denominator
        if small and _ratio_ok(a_n, last_nonzero, n, m):
            streak += 1
        else:
            streak = 0
        if a_n:
            last_nonzero = (n, a_n)
        m_pow *= m
        if streak >= stable_terms:
            return total, n + 1
    raise AssertionError("unreachable")  # pragma: no cover


def eval_at_inverse_int(
    rec: PRecurrence,
    m: int,
    p: int,
    guard_digits: int = GUARD_DIGITS,
    stable_terms: int = STABLE_TERMS,
    term_cap: Optional[int] = None,
) -> Fixed:
    """``S(1/m)`` to ``p`` decimal places, pulling terms lazily from ``rec``."""
    total, _ = partial_sum_at_inverse_int(rec, m, p, guard_digits, stable_terms, term_cap)
    return rat_to_fixed(total, p)


def substitute_series(P: "BivariatePoly", S: TruncatedSeries) -> TruncatedSeries:
    """``sum_j q_j(z) S(z)^j`` modulo ``z**S.order`` (Horner in y)."""
    n = S.order
    qs = P.y_coeffs
    acc = TruncatedSeries.from_poly(qs[-1], n)
    for q in reversed(qs[:-1]):
        acc = mul_trunc(acc, S) + TruncatedSeries.from_poly(q, n)
    return acc


def series_from_algebraic(P: "BivariatePoly", a0, N: int) -> TruncatedSeries:
    """Power-series root of ``P(z, y) = 0`` with ``y(0) = a0``, to order N.

    Newton lifting: each step doubles the number of correct coefficients.
    """
    a0 = Fraction(a0)
    at_origin = [q[0] for q in P.y_coeffs]
    value = sum((c * a0**j for j, c in enumerate(at_origin)), Fraction(0))
    if value != 0:
        raise NoRoot(f"P(0, {a0}) = {value} != 0")
    slope = sum((j * c * a0 ** (j - 1) for j, c in enumerate(at_origin) if j), Fraction(0))
    if slope == 0:
        raise NonSimpleRoot(f"dP/dy vanishes at (0, {a0})")
    if N == 0:
        return TruncatedSeries([], 0)
    dP = P.derivative_y()
    y = TruncatedSeries([a0], 1)
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        y = TruncatedSeries(y.coeffs, prec)
        f = substitute_series(P, y)
        fp = substitute_series(dP, y)
        y = y - mul_trunc(f, fp.inverse())
    return y
