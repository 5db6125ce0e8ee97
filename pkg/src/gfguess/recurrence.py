"""P-recurrence guessing by undetermined coefficients.

A P-recurrence of order ``k`` is

    P_0(n) a(n) = P_1(n) a(n-1) + ... + P_k(n) a(n-k) + Q(n)

with polynomial ``P_i`` and an optional polynomial inhomogeneous term ``Q``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, Iterator, Optional

from .exceptions import InsufficientData, SingularIndex
from .linalg import lowest_kernel_vector, nullspace
from .numerics import Poly, as_fraction, clear_denominators, format_poly, poly_gcd

logger = logging.getLogger(__name__)

DEFAULT_GUARD = 3


@dataclass(frozen=True)
class TermSequence:
    """Exact rational terms ``a_0 .. a_{N-1}`` plus an optional label."""

    terms: tuple[Fraction, ...]
    label: Optional[str] = None

    def __init__(self, terms: Iterable, label: Optional[str] = None):
        object.__setattr__(self, "terms", tuple(as_fraction(t) for t in terms))
        object.__setattr__(self, "label", label)

    def __len__(self) -> int:
        return len(self.terms)

    def __getitem__(self, n):
        return self.terms[n]

    def __iter__(self):
        return iter(self.terms)

    def as_strings(self) -> list[str]:
        return [str(t) for t in self.terms]


@dataclass(frozen=True)
class PRecurrence:
    """Polynomial-coefficient recurrence with seed terms.

    ``coeffs[i]`` is ``P_i`` in the convention above. ``initials`` holds every
    term the recurrence cannot produce on its own: the first ``order`` terms
    and any term at an index where ``P_0`` vanishes inside the fitted range.
    """

    coeffs: tuple[Poly, ...]
    initials: tuple[Fraction, ...]
    inhom: Optional[Poly] = None

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise ValueError("a recurrence needs P_0 and at least P_1")
        if self.coeffs[0].is_zero():
            raise ValueError("P_0 must not vanish identically")
        if len(self.initials) < self.order:
            raise ValueError(f"need at least {self.order} initial terms")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max(p.degree for p in self.coeffs)

    @property
    def type_tag(self) -> tuple[int, int]:
        """(maximum coefficient degree, number of terms)."""
        return (self.degree, self.order + 1)

    def next_term(self, n: int, history) -> Fraction:
        """Solve the recurrence for ``a(n)`` given ``history[n-i]`` for i=1..k."""
        lead = self.coeffs[0](n)
        if lead == 0:
            raise SingularIndex(n)
        acc = sum((self.coeffs[i](n) * history[n - i] for i in range(1, self.order + 1)), Fraction(0))
        if self.inhom is not None:
            acc += self.inhom(n)
        return acc / lead

    def residual(self, n: int, terms) -> Fraction:
        """``P_0(n) a(n) - sum P_i(n) a(n-i) - Q(n)``."""
        r = self.coeffs[0](n) * terms[n]
        for i in range(1, self.order + 1):
            r -= self.coeffs[i](n) * terms[n - i]
        if self.inhom is not None:
            r -= self.inhom(n)
        return r

    def iter_terms(self) -> Iterator[Fraction]:
        """Lazily yield a(0), a(1), ... in one memoized pass."""
        k = self.order
        window: list[Fraction] = []
        n = 0
        for t in self.initials:
            window.append(t)
            yield t
            n += 1
        # only the last k terms are ever read
        hist = {n - 1 - j: window[-1 - j] for j in range(k)}
        while True:
            t = self.next_term(n, hist)
            yield t
            hist[n] = t
            del hist[n - k]
            n += 1

    def __str__(self) -> str:
        def fmt(p):
            s = format_poly(p.coeffs, "n")
            return f"({s})" if len(p.coeffs) > 1 else s

        lhs = f"{fmt(self.coeffs[0])}*a(n)"
        rhs = [f"{fmt(p)}*a(n-{i})" for i, p in enumerate(self.coeffs[1:], 1) if p]
        if self.inhom is not None:
            rhs.append(fmt(self.inhom))
        return f"{lhs} = {' + '.join(rhs) if rhs else '0'}"


def _min_terms(guard: int) -> int:
    # order 1, degree 0: two unknowns need two equations beyond the guard
    return guard + 3


def _fit_at(terms, k: int, d: int, inhom: bool, guard: int):
    n_terms = len(terms)
    n_unknowns = (d + 1) * (k + 1) + ((d + 1) if inhom else 0)
    n_equations = n_terms - k
    if n_unknowns > n_equations - guard:
        return None
    powers = [[Fraction(n) ** e for e in range(d + 1)] for n in range(n_terms)]
    rows = []
    for n in range(k, n_terms):
        row = []
        for i in range(k + 1):
            sign = 1 if i == 0 else -1
            a = terms[n - i]
            row.extend(sign * a * pw for pw in powers[n])
        if inhom:
            row.extend(-pw for pw in powers[n])
        rows.append(row)
    basis = nullspace(rows, n_unknowns)
    basis = [v for v in basis if any(v[: d + 1])]
    if not basis:
        return None
    # cheapest first: low degree, then low shift, inhomogeneous part last
    priority = sorted(range(n_unknowns), key=lambda c: (-(c % (d + 1)), -(c // (d + 1))))
    v = lowest_kernel_vector(basis, priority)
    if not any(v[: d + 1]):
        v = min(basis, key=lambda w: _vector_cost(w, d))
    return clear_denominators(v)


def _vector_cost(v, d):
    ints = clear_denominators(v)
    maxdeg = max((c % (d + 1) for c, x in enumerate(ints) if x), default=0)
    return (maxdeg, sum(abs(x).bit_length() for x in ints))


def _build(terms, k: int, d: int, inhom: bool, vec) -> PRecurrence:
    polys = [Poly(vec[i * (d + 1) : (i + 1) * (d + 1)]) for i in range(k + 1)]
    q = Poly(vec[(k + 1) * (d + 1) :]) if inhom else None
    if q is not None and q.is_zero():
        q = None
    while len(polys) > 2 and polys[-1].is_zero():
        polys.pop()
    order = len(polys) - 1
    seeds = order
    for n in range(order, len(terms)):
        if polys[0](n) == 0:
            seeds = n + 1
    return PRecurrence(tuple(polys), tuple(terms[:seeds]), q)


def search_order(max_order: int, max_degree: int) -> Iterator[tuple[int, int]]:
    """(order, degree) pairs by ascending order+degree, smaller order first."""
    for s in range(1, max_order + max_degree + 1):
        for k in range(1, max_order + 1):
            d = s - k
            if 0 <= d <= max_degree:
                yield k, d


def fit_recurrence(
    seq: TermSequence | Iterable,
    max_order: int = 6,
    max_degree: int = 6,
    guard: int = DEFAULT_GUARD,
) -> Optional[PRecurrence]:
    """Guess the smallest P-recurrence satisfied by every supplied term.

    A fit at (order k, degree d) is attempted only when the number of
    unknowns is at most the number of equations minus ``guard``; since the
    solution is only defined up to scale, that leaves at least ``guard + 1``
    equations acting purely as checks. At each (k, d) the homogeneous ansatz
    is tried before the one with an inhomogeneous term of degree <= d.

    Returns ``None`` if nothing within the bounds fits. Raises
    :class:`InsufficientData` if even the (1, 0) ansatz cannot be checked.
    """
    if not isinstance(seq, TermSequence):
        seq = TermSequence(seq)
    if max_order < 1 or max_degree < 0 or guard < 1:
        raise ValueError("need max_order >= 1, max_degree >= 0, guard >= 1")
    terms = seq.terms
    if len(terms) < _min_terms(guard):
        raise InsufficientData(f"{len(terms)} terms; at least {_min_terms(guard)} needed with guard={guard}")
    for k, d in search_order(max_order, max_degree):
        for inhom in (False, True):
            vec = _fit_at(terms, k, d, inhom, guard)
            if vec is not None:
                rec = _build(terms, k, d, inhom, vec)
                logger.debug("fitted order %d degree %d%s", k, d, " (inhom)" if inhom else "")
                return rec
    return None


def extend_sequence(rec: PRecurrence, up_to: int) -> TermSequence:
    """Terms a(0)..a(up_to) generated in a single linear pass."""
    if up_to < rec.order - 1:
        raise ValueError("up_to must be at least order - 1")
    return TermSequence(islice(rec.iter_terms(), up_to + 1))


@dataclass(frozen=True)
class RationalFunction:
    num: Poly
    den: Poly = field(default_factory=lambda: Poly.constant(1))

    def __call__(self, n):
        return self.num(n) / self.den(n)

    def __str__(self) -> str:
        return f"({format_poly(self.num.coeffs, 'n')})/({format_poly(self.den.coeffs, 'n')})"


def ratio_form(rec: PRecurrence) -> Optional[RationalFunction]:
    """``a(n+1)/a(n)`` as a reduced rational function of ``n``.

    Only defined for homogeneous order-1 recurrences; returns ``None``
    otherwise.
    """
    if rec.order != 1 or rec.inhom is not None:
        return None
    num = rec.coeffs[1].shift(1)
    den = rec.coeffs[0].shift(1)
    if num.is_zero():
        return RationalFunction(Poly(), Poly.constant(1))
    g = poly_gcd(num, den)
    num, den = num // g, den // g
    scale = 1 / den.lc
    return RationalFunction(num * scale, den * scale)
