"""From per-point minimal polynomials (or raw terms) to one algebraic equation.

The equation is ``sum_j q_j(z) y^j = 0`` where ``y`` stands for the
generating function. Per-point polynomials come from algdep at ``z = 1/m``;
interpolating each coefficient in ``m`` and substituting ``m = 1/z`` yields
the ``q_j``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

from .exceptions import DegreeMismatch, DuplicateAbscissa, InsufficientData, NoBranchMatches, UnstableInterpolation
from .exceptions import NonSimpleRoot, NoRoot
from .linalg import lowest_kernel_vector, nullspace
from .numerics import Poly, clear_denominators, format_poly, poly_gcd, squarefree_kernel
from .recurrence import TermSequence
from .series import TruncatedSeries, from_sequence, mul_trunc, pow_trunc, series_from_algebraic, substitute_series

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BivariatePoly:
    """``sum_j y_coeffs[j](z) * y**j``."""

    y_coeffs: tuple[Poly, ...]

    def __init__(self, y_coeffs: Iterable):
        qs = [q if isinstance(q, Poly) else Poly(q) for q in y_coeffs]
        while qs and qs[-1].is_zero():
            qs.pop()
        if not qs:
            raise ValueError("zero polynomial")
        object.__setattr__(self, "y_coeffs", tuple(qs))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "BivariatePoly":
        """Build from ``rows[j][k]`` = coefficient of ``z**k y**j``."""
        return cls(Poly(r) for r in rows)

    @property
    def y_degree(self) -> int:
        return len(self.y_coeffs) - 1

    @property
    def z_degree(self) -> int:
        return max(q.degree for q in self.y_coeffs)

    def rows(self) -> list[list[Fraction]]:
        return [list(q.coeffs) for q in self.y_coeffs]

    def int_rows(self) -> list[list[int]]:
        return [list(q.integer_coeffs()) for q in self.y_coeffs]

    def derivative_y(self) -> "BivariatePoly":
        if self.y_degree == 0:
            raise ValueError("derivative of a y-free polynomial is zero")
        return BivariatePoly(q * j for j, q in enumerate(self.y_coeffs) if j)

    def normalized(self) -> "BivariatePoly":
        """Integer coefficients, globally primitive, first nonzero coefficient positive.

        Coefficients are scanned by ascending power of y, then of z.
        """
        width = self.z_degree + 1
        flat = [c for q in self.y_coeffs for c in (list(q.coeffs) + [Fraction(0)] * (width - len(q.coeffs)))]
        ints = clear_denominators(flat)
        return BivariatePoly(Poly(ints[j * width : (j + 1) * width]) for j in range(len(self.y_coeffs)))

    def __call__(self, z, y):
        acc = Fraction(0)
        for q in reversed(self.y_coeffs):
            acc = acc * y + q(z)
        return acc

    def __str__(self) -> str:
        parts = []
        for j, q in enumerate(self.y_coeffs):
            if q.is_zero():
                continue
            body = format_poly(q.coeffs, "z")
            if j == 0:
                parts.append(f"({body})")
            else:
                ypow = "y" if j == 1 else f"y^{j}"
                parts.append(f"({body})*{ypow}")
        return " + ".join(parts) + " = 0"


# ---------------------------------------------------------------- interpolation


def newton_interp(points: Sequence[tuple]) -> Poly:
    """Exact interpolating polynomial of minimal degree via divided differences."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise DuplicateAbscissa("interpolation abscissae must be distinct")
    coef = [Fraction(y) for _, y in points]
    n = len(xs)
    for level in range(1, n):
        for i in range(n - 1, level - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - level])
    # vanishing trailing differences reveal the true degree
    top = n - 1
    while top > 0 and coef[top] == 0:
        top -= 1
    p = Poly.constant(coef[top])
    for i in range(top - 1, -1, -1):
        p = p * Poly((-xs[i], 1)) + coef[i]
    return p


def _newton_family(polys, ms, J):
    fams = [newton_interp([(m, p[j] if j < len(p) else 0) for p, m in zip(polys, ms)]) for j in range(J + 1)]
    stable = max(q.degree for q in fams) <= len(ms) - 2
    return fams if stable else None


def _rescaled_family(polys, ms, J, guard):
    """Coefficient polynomials up to an unknown per-point scale.

    Solves ``Q_j(m_i) p_J(m_i) = Q_J(m_i) p_j(m_i)`` for the lowest degree bound
    admitting a solution, which is immune to algdep dividing out a content
    that happens to be shared at particular ``m``.
    """
    M = len(ms)
    D = 0
    while (J + 1) * (D + 1) <= J * M - guard:
        ncols = (J + 1) * (D + 1)
        rows = []
        for p, m in zip(polys, ms):
            pw = [Fraction(m) ** k for k in range(D + 1)]
            for j in range(J):
                row = [Fraction(0)] * ncols
                for k in range(D + 1):
                    row[j * (D + 1) + k] = pw[k] * p[J]
                    row[J * (D + 1) + k] = -pw[k] * p[j]
                rows.append(row)
        basis = nullspace(rows, ncols)
        if basis:
            priority = sorted(range(ncols), key=lambda c: (-(c % (D + 1)), -(c // (D + 1))))
            v = lowest_kernel_vector(basis, priority)
            fams = [Poly(v[j * (D + 1) : (j + 1) * (D + 1)]) for j in range(J + 1)]
            if all(fams[J](m) != 0 for m in ms):
                return fams
            return None
        D += 1
    return None


def _family(polys, ms, J, rescale, guard):
    fams = _newton_family(polys, ms, J)
    if fams is None and rescale:
        fams = _rescaled_family(polys, ms, J, guard)
    return fams


def assemble_bivariate(
    polys: Sequence[Sequence[int]],
    ms: Sequence[int],
    rescale: bool = True,
    guard: int = 3,
) -> BivariatePoly:
    """Interpolate per-``m`` polynomials into one equation in ``(z, y)``.

    Each y-coefficient is Newton-interpolated over ``m``; the fit must be
    stable (its degree must not change if the last point is dropped). If it
    is not and ``rescale`` is set, a content-tolerant fit is tried. Then
    ``m = 1/z`` is substituted and ``z**D`` cleared, ``D`` being the largest
    interpolated degree.

    Raises :class:`DegreeMismatch` if the polynomials differ in degree and
    :class:`UnstableInterpolation` (with suspected ``outliers`` indices) if no
    consistent family is found.
    """
    if len(polys) != len(ms):
        raise ValueError("polys and ms must align")
    if len(set(ms)) != len(ms):
        raise DuplicateAbscissa("evaluation points must be distinct")
    degs = {len(p) - 1 for p in polys}
    if len(degs) != 1:
        raise DegreeMismatch(f"algdep degrees differ across points: {sorted(degs)}")
    J = degs.pop()
    polys = [tuple(Fraction(c) for c in p) for p in polys]
    fams = _family(polys, ms, J, rescale, guard)
    if fams is None:
        outliers = []
        if len(ms) > 3:
            for i in range(len(ms)):
                rest_p = polys[:i] + polys[i + 1 :]
                rest_m = list(ms[:i]) + list(ms[i + 1 :])
                if _family(rest_p, rest_m, J, rescale, guard) is not None:
                    outliers.append(i)
        raise UnstableInterpolation(
            f"no stable coefficient family over {len(ms)} points", outliers=outliers
        )
    D = max(q.degree for q in fams)
    return BivariatePoly(q.reversed(D) if q else Poly() for q in fams).normalized()


# ---------------------------------------------------------------- direct route


def _z_bounds(deg_y: int, deg_z) -> list[int]:
    if isinstance(deg_z, int):
        return [deg_z] * (deg_y + 1)
    bounds = list(deg_z)
    if len(bounds) != deg_y + 1:
        raise ValueError("need one z-degree bound per power of y")
    return bounds


def direct_algeq(
    seq: TermSequence | Iterable,
    deg_y: int,
    deg_z: int | Sequence[int],
    guard: int = 3,
) -> Optional[BivariatePoly]:
    """Solve for ``c_{j,k}`` with ``sum c_{j,k} z^k S^j = O(z^N)`` directly.

    ``deg_z`` may be a single bound or one bound per power of y (a staircase
    ansatz). Every one of the N series coefficients is forced to vanish; at
    least ``guard`` of those equations exceed the unknown count.
    """
    if not isinstance(seq, TermSequence):
        seq = TermSequence(seq)
    bounds = _z_bounds(deg_y, deg_z)
    N = len(seq)
    cols = [(j, k) for j in range(deg_y + 1) for k in range(bounds[j] + 1)]
    if len(cols) + guard > N:
        raise InsufficientData(f"{len(cols)} unknowns + guard {guard} exceed {N} terms")
    S = from_sequence(seq)
    powers = [pow_trunc(S, j) for j in range(deg_y + 1)]
    rows = []
    for n in range(N):
        rows.append([powers[j].coeffs[n - k] if n >= k else Fraction(0) for j, k in cols])
    basis = nullspace(rows, len(cols))
    if not basis:
        return None
    priority = sorted(range(len(cols)), key=lambda c: (-cols[c][0], -cols[c][1]))
    v = lowest_kernel_vector(basis, priority)
    y_rows = [[Fraction(0)] * (b + 1) for b in bounds]
    for (j, k), x in zip(cols, v):
        y_rows[j][k] = x
    if not any(any(r) for r in y_rows[1:]):
        return None
    return BivariatePoly.from_rows(y_rows).normalized()


# ---------------------------------------------------------------- closed forms


def _is_square(q: Fraction) -> Optional[Fraction]:
    from math import isqrt

    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _sqrt_series(p: Poly, order: int) -> Optional[TruncatedSeries]:
    """Power-series square root with positive leading coefficient, if rational."""
    v = p.valuation()
    if v < 0:
        return TruncatedSeries([], order)
    if v % 2:
        return None
    rest = Poly(p.coeffs[v:])
    c0 = _is_square(rest[0])
    if c0 is None:
        return None
    half = v // 2
    n = max(order - half, 0)
    target = TruncatedSeries.from_poly(rest, n)
    s = TruncatedSeries([c0], min(1, n))
    prec = min(1, n)
    while prec < n:
        prec = min(2 * prec, n)
        s = TruncatedSeries(s.coeffs, prec)
        # s <- (s + target/s) / 2
        s = (s + mul_trunc(target.truncate(prec), s.inverse())).scale(Fraction(1, 2))
    return s.shift(half).truncate(order) if half else s


@dataclass(frozen=True)
class RadicalClosedForm:
    """``(numerator + sign * cofactor * sqrt(radicand)) / denominator``.

    For a linear equation ``radicand`` is 1 and ``sign`` 0.
    """

    numerator: Poly
    denominator: Poly
    discriminant: Poly
    sign: int
    cofactor: Poly
    radicand: Poly

    @property
    def is_rational(self) -> bool:
        return self.sign == 0

    def squarefree_radicand(self) -> Poly:
        return self.radicand

    def series(self, order: int) -> Optional[TruncatedSeries]:
        """Expansion at z = 0, or ``None`` if the branch is not a power series."""
        w = self.denominator.valuation()
        n = order + w
        num = TruncatedSeries.from_poly(self.numerator, n)
        if self.sign:
            root = _sqrt_series(self.radicand, n)
            if root is None:
                return None
            num = num + mul_trunc(TruncatedSeries.from_poly(self.cofactor, n), root).scale(self.sign)
        if num.valuation() < w:
            return None
        shifted = TruncatedSeries(num.coeffs[w:], order)
        den = TruncatedSeries.from_poly(Poly(self.denominator.coeffs[w:]), order)
        return mul_trunc(shifted, den.inverse())

    def __str__(self) -> str:
        num = format_poly(self.numerator.coeffs, "z")
        den = format_poly(self.denominator.coeffs, "z")
        if self.is_rational:
            if len([c for c in self.numerator.coeffs if c]) > 1:
                num = f"({num})"
            return f"{num}/({den})"
        rad = format_poly(self.radicand.coeffs, "z")
        cof = self.cofactor
        root = f"({rad})^(1/2)"
        if cof != 1:
            root = f"({format_poly(cof.coeffs, 'z')})*{root}"
        op = "+" if self.sign > 0 else "-"
        if self.numerator.is_zero():
            head = "" if self.sign > 0 else "-"
            return f"({head}{root})/({den})"
        return f"({num} {op} {root})/({den})"


def _split_discriminant(delta: Poly) -> tuple[Poly, Poly]:
    """``delta = cofactor**2 * radicand`` with a squarefree integer radicand."""
    if delta.is_zero():
        return Poly(), Poly.constant(1)
    core, root = squarefree_kernel(delta)
    core_int = Poly(clear_denominators(core.coeffs))
    # core is monic, so delta = kappa * root^2 * core_int
    kappa = delta.lc / core_int.lc
    r = _is_square(kappa)
    if r is not None:
        return root * r, core_int
    # keep the non-square constant under the root, made integral
    a, b = kappa.numerator, kappa.denominator
    return root * Fraction(1, b), core_int * (a * b)


def _tidy(form: RadicalClosedForm) -> RadicalClosedForm:
    """Cancel common factors; make the denominator and cofactor start positive."""
    num, den, cof, sign = form.numerator, form.denominator, form.cofactor, form.sign
    g = poly_gcd(poly_gcd(num, cof), den)
    num, den, cof = num // g, den // g, cof // g
    flat = list(num.coeffs) + list(den.coeffs) + list(cof.coeffs)
    ints = clear_denominators(flat)
    scale = Fraction(ints[len(num.coeffs)]) / den.coeffs[0] if den.coeffs and den.coeffs[0] else None
    if scale is None:
        first = next(i for i, c in enumerate(flat) if c)
        scale = Fraction(ints[first]) / flat[first]
    num, den, cof = num * scale, den * scale, cof * scale
    if den[den.valuation()] < 0:
        num, den, sign = -num, -den, -sign
    if cof[cof.valuation()] < 0:
        cof, sign = -cof, -sign
    return RadicalClosedForm(num, den, form.discriminant, sign, cof, form.radicand)


def solve_closed_form(P: BivariatePoly, a0, a1=None) -> Optional[RadicalClosedForm]:
    """Closed form of the power-series root with constant term ``a0``.

    Linear equations give ``-q_0/q_1``; quadratics give the branch of the
    quadratic formula whose expansion starts with ``a0`` (and ``a1`` when both
    do). Returns ``None`` for y-degree above 2.
    """
    a0 = Fraction(a0)
    if P.y_degree == 1:
        q0, q1 = P.y_coeffs
        g = poly_gcd(q0, q1) if q0 else q1.monic()
        num, den = (-q0) // g, q1 // g
        s = 1 / den[den.valuation()] if den else 1
        one = Poly.constant(1)
        return RadicalClosedForm(num * s, den * s, Poly(), 0, one, one)
    if P.y_degree != 2:
        return None
    C, B, A = P.y_coeffs
    delta = B * B - A * C * 4
    cofactor, radicand = _split_discriminant(delta)
    branches = []
    for sign in (1, -1):
        form = _tidy(RadicalClosedForm(-B, A * 2, delta, sign, cofactor, radicand))
        ser = form.series(3)
        if ser is not None and ser[0] == a0:
            branches.append((form, ser))
    if not branches:
        raise NoBranchMatches(f"no branch of the quadratic formula starts with {a0}")
    if len(branches) > 1:
        if a1 is None:
            try:
                a1 = series_from_algebraic(P, a0, 2)[1]
            except (NoRoot, NonSimpleRoot):
                a1 = None
        if a1 is not None:
            branches = [b for b in branches if b[1][1] == Fraction(a1)] or branches
    return branches[0][0]


# ---------------------------------------------------------------- verification


class Verification(NamedTuple):
    passed: bool
    valuation: int
    term_count: int
    series_reproduces: Optional[bool]


def verify_candidate(P: BivariatePoly, seq: TermSequence | Iterable, slack: int = 2) -> Verification:
    """Substitute the sequence's series into ``P`` and measure the z-adic valuation.

    Passes iff the valuation is at least ``len(seq) - slack``. For y-degree 1
    or 2 also reports whether the series root through ``a_0`` reproduces the
    terms exactly (``None`` if that root is not simple).
    """
    if not isinstance(seq, TermSequence):
        seq = TermSequence(seq)
    N = len(seq)
    S = from_sequence(seq)
    v = substitute_series(P, S).valuation()
    passed = P.y_degree >= 1 and v >= N - slack
    reproduces = None
    if 1 <= P.y_degree <= 2 and N:
        try:
            reproduces = series_from_algebraic(P, seq[0], N).coeffs == tuple(seq.terms)
        except NonSimpleRoot:
            reproduces = None
        except NoRoot:
            reproduces = False
    return Verification(passed, v, N, reproduces)


def _profiles(max_deg_y: int, deg_z_bound: int, max_unknowns: int):
    # every (b_0..b_J) with b_j <= deg_z_bound, ordered by unknown count, then y-degree
    found = []

    def rec(prefix, budget, J):
        if len(prefix) == J + 1:
            if budget >= 0:
                found.append(tuple(prefix))
            return
        for b in range(min(deg_z_bound, budget - 1) + 1):
            rec(prefix + [b], budget - b - 1, J)

    for J in range(1, max_deg_y + 1):
        rec([], max_unknowns, J)
    found.sort(key=lambda b: (sum(b) + len(b), len(b), b[::-1]))
    return found


def search_direct(
    seq: TermSequence | Iterable,
    max_deg_y: int = 2,
    deg_z_bound: int = 12,
    guard: int = 3,
) -> Optional[BivariatePoly]:
    """Smallest equation found by :func:`direct_algeq` over staircase degree profiles.

    Profiles are tried by increasing number of unknowns, so the first hit has
    the fewest coefficients; only profiles leaving ``guard`` spare equations
    are considered.
    """
    if not isinstance(seq, TermSequence):
        seq = TermSequence(seq)
    budget = len(seq) - guard
    for prof in _profiles(max_deg_y, deg_z_bound, budget):
        P = direct_algeq(seq, len(prof) - 1, list(prof), guard)
        if P is not None:
            logger.debug("direct route hit with z-degree profile %s", prof)
            return P
    return None
