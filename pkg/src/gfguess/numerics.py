"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator). On top of that this module provides a base-10 fixed-point type
and univariate polynomials with rational coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence, Union

RationalLike = Union[int, Fraction]


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings; reject inexact floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a sequence term")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact float {x!r}; pass a Fraction or string")
        return Fraction(int(x))
    # numpy integer scalars and the like
    if hasattr(x, "__index__"):
        return Fraction(x.__index__())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def div_round(num: int, den: int) -> int:
    """Round num/den to the nearest integer, ties to even."""
    if den == 0:
        raise ZeroDivisionError("div_round by zero")
    if den < 0:
        num, den = -num, -den
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q % 2 == 1):
        q += 1
    return q


@dataclass(frozen=True)
class Fixed:
    """Decimal fixed-point number ``mantissa * 10**-scale``."""

    mantissa: int
    scale: int

    def __post_init__(self):
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    def to_fraction(self) -> Fraction:
        return Fraction(self.mantissa, 10**self.scale)

    def rescale(self, p: int) -> "Fixed":
        if p >= self.scale:
            return Fixed(self.mantissa * 10 ** (p - self.scale), p)
        return Fixed(div_round(self.mantissa, 10 ** (self.scale - p)), p)

    def digits(self) -> str:
        """All significant digits with the decimal point removed."""
        return str(abs(self.mantissa))

    def __str__(self) -> str:
        sign = "-" if self.mantissa < 0 else ""
        s = str(abs(self.mantissa)).rjust(self.scale + 1, "0")
        if self.scale == 0:
            return sign + s
        return f"{sign}{s[:-self.scale]}.{s[-self.scale:]}"

    def __abs__(self) -> "Fixed":
        return Fixed(abs(self.mantissa), self.scale)


def rat_to_fixed(r: RationalLike, p: int) -> Fixed:
    """Round ``r`` to ``p`` decimal places (half to even)."""
    if p < 0:
        raise ValueError("scale must be non-negative")
    r = Fraction(r)
    return Fixed(div_round(r.numerator * 10**p, r.denominator), p)


def fixed_pow(x: Fixed, k: int, p: int) -> Fixed:
    """``x**k`` rounded once to scale ``p``.

    The power is formed exactly from the mantissa, so the only error is the
    final rounding (half an ulp), well inside ``(k+1) * 10**-p``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return Fixed(10**p, p)
    num = x.mantissa**k
    shift = x.scale * k - p
    if shift >= 0:
        return Fixed(div_round(num, 10**shift), p)
    return Fixed(num * 10 ** (-shift), p)


def _strip(coeffs: Iterable[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Univariate polynomial over Q, coefficients in ascending degree.

    Immutable. Trailing zeros are stripped so the zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def constant(cls, c: RationalLike) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: RationalLike = 1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self.coeffs, "x")

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.constant(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        return poly_eval(self, x)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lc = other.lc
        dd = other.degree
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] / lc
            q[k - dd] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k - dd + i] -= c * b
        return Poly(q), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self * (1 / self.lc) if self.coeffs else self

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def shift(self, s: RationalLike) -> "Poly":
        """Return ``p(x + s)``."""
        result = Poly()
        lin = Poly((s, 1))
        for c in reversed(self.coeffs):
            result = result * lin + c
        return result

    def reversed(self, degree: int) -> "Poly":
        """``x**degree * p(1/x)``; ``degree`` must be at least ``self.degree``."""
        if degree < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        c = list(self.coeffs) + [Fraction(0)] * (degree + 1 - len(self.coeffs))
        return Poly(reversed(c))

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def denominator_lcm(self) -> int:
        return reduce(math.lcm, (c.denominator for c in self.coeffs), 1)

    def integer_coeffs(self) -> tuple[int, ...]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return tuple(c.numerator for c in self.coeffs)


def poly_eval(p: Poly | Sequence[RationalLike], x):
    """Horner evaluation; exact for rational ``x``."""
    coeffs = p.coeffs if isinstance(p, Poly) else p
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    if isinstance(acc, int):
        return Fraction(acc)
    return acc


def canonical_sign(coeffs: Sequence[RationalLike]) -> int:
    """+1 or -1 so the first nonzero coefficient (constant term first) is positive."""
    for c in coeffs:
        if c:
            return 1 if c > 0 else -1
    return 1


def primitive_part(coeffs: Sequence[int] | Poly) -> tuple[int, tuple[int, ...]]:
    """Split an integer polynomial into positive content and canonical primitive part.

    The sign is chosen so that the lowest-degree nonzero coefficient is positive.
    Raises ``ValueError`` on the zero polynomial.
    """
    if isinstance(coeffs, Poly):
        coeffs = coeffs.integer_coeffs()
    coeffs = tuple(int(c) for c in coeffs)
    g = math.gcd(*coeffs) if coeffs else 0
    if g == 0:
        raise ValueError("primitive part of the zero polynomial")
    s = canonical_sign(coeffs)
    prim = list(s * c // g for c in coeffs)
    while prim and prim[-1] == 0:
        prim.pop()
    return g, tuple(prim)


def clear_denominators(values: Iterable[RationalLike]) -> tuple[int, ...]:
    """Scale rationals by the lcm of their denominators, divide by content, fix sign.

    Used to normalise coefficient vectors of any shape; returns an integer
    tuple of the same length (zeros preserved).
    """
    vals = [Fraction(v) for v in values]
    den = reduce(math.lcm, (v.denominator for v in vals), 1)
    ints = [int(v * den) for v in vals]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    s = canonical_sign(ints)
    return tuple(s * v // g for v in ints)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (zero if both are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_factorization(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over Q: list of (monic squarefree factor, multiplicity).

    Factors of multiplicity with no roots are omitted; the leading
    coefficient is not represented.
    """
    if p.degree < 1:
        return []
    f = p.monic()
    fp = f.derivative()
    a = poly_gcd(f, fp)
    out = []
    b = f // a
    c = fp // a
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, i))
        b = b // g
        c = d // g
        d = c - b.derivative()
        i += 1
    return out


def squarefree_kernel(p: Poly) -> tuple[Poly, Poly]:
    """Return ``(core, root)`` with ``p = c * root**2 * core``, ``core`` squarefree.

    Both results are monic; the constant ``c`` is ``p.lc``.
    """
    core = Poly.constant(1)
    root = Poly.constant(1)
    for g, mult in squarefree_factorization(p):
        root = root * g ** (mult // 2)
        if mult % 2:
            core = core * g
    return core, root


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(coeffs: Sequence[RationalLike], var: str = "x") -> str:
    """Human-readable ascending rendering, e.g. ``1 - 4*z + z^2``."""
    terms = []
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if not c:
            continue
        mag = abs(c)
        if k == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{_fmt_coeff(mag)}*{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out
