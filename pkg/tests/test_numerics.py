from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfguess.numerics import (
    Fixed,
    Poly,
    as_fraction,
    clear_denominators,
    div_round,
    fixed_pow,
    format_poly,
    poly_gcd,
    primitive_part,
    rat_to_fixed,
    squarefree_factorization,
    squarefree_kernel,
)
from oracles import long_division, poly_value_brute

small = st.integers(-50, 50)
rationals = st.fractions(min_value=-99, max_value=99, max_denominator=20)
polys = st.lists(rationals, max_size=6).map(Poly)


def test_as_fraction_rejects_inexact_input():
    assert as_fraction("3/4") == Fraction(3, 4)
    assert as_fraction(2.0) == 2
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


@pytest.mark.parametrize(
    "num, den, expected",
    [(5, 2, 2), (7, 2, 4), (-5, 2, -2), (-7, 2, -4), (1, 3, 0), (2, 3, 1), (10, -4, -2)],
)
def test_div_round_ties_to_even(num, den, expected):
    assert div_round(num, den) == expected


@given(st.integers(1, 10**30), st.integers(1, 10**12), st.integers(0, 60))
def test_rat_to_fixed_is_within_half_ulp(num, den, p):
    x = rat_to_fixed(Fraction(num, den), p)
    assert abs(x.to_fraction() - Fraction(num, den)) <= Fraction(1, 2 * 10**p)
    truncated, _ = long_division(num, den, p)
    assert x.mantissa - truncated in (0, 1)


def test_fixed_rendering():
    assert str(Fixed(123, 2)) == "1.23"
    assert str(Fixed(-5, 3)) == "-0.005"
    assert str(Fixed(42, 0)) == "42"
    assert Fixed(15, 1).rescale(0).mantissa == 2
    assert Fixed(15, 1).rescale(3) == Fixed(1500, 3)


@given(st.integers(-(10**40), 10**40), st.integers(0, 6), st.integers(10, 40))
def test_fixed_pow_single_rounding(mant, k, p):
    x = Fixed(mant, 20)
    exact = x.to_fraction() ** k
    got = fixed_pow(x, k, p)
    assert abs(got.to_fraction() - exact) <= Fraction(1, 2 * 10**p)


def test_poly_basics():
    p = Poly([1, -4, 0, 0])
    assert p.coeffs == (1, -4)
    assert p.degree == 1
    assert Poly().degree == -1
    assert (p * p).coeffs == (1, -8, 16)
    assert Poly([0, 0, 3]).valuation() == 2
    assert Poly([1, 2, 3]).reversed(4).coeffs == (0, 0, 3, 2, 1)
    assert Poly([1, 1]).shift(1).coeffs == (2, 1)
    with pytest.raises(AttributeError):
        p.coeffs = ()


@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Poly()


@given(polys, st.lists(rationals, min_size=1, max_size=5).map(Poly).filter(bool))
def test_divmod_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(polys, rationals)
def test_horner_matches_naive_evaluation(p, x):
    assert p(x) == poly_value_brute(p.coeffs, x)


def test_poly_gcd_is_monic_common_factor():
    a = Poly([-1, 0, 1])  # (x-1)(x+1)
    b = Poly([1, -2, 1])  # (x-1)^2
    assert poly_gcd(a, b) == Poly([-1, 1])


@given(st.lists(small, min_size=1, max_size=6).filter(any))
def test_primitive_part_splits_content(coeffs):
    g, prim = primitive_part(coeffs)
    stripped = list(coeffs)
    while stripped[-1] == 0:
        stripped.pop()
    assert g > 0
    assert [g * c for c in prim] in (stripped, [-x for x in stripped])
    first = next(c for c in prim if c)
    assert first > 0


def test_primitive_part_of_zero_raises():
    with pytest.raises(ValueError):
        primitive_part([0, 0])


def test_clear_denominators_keeps_zeros():
    assert clear_denominators([Fraction(1, 2), 0, Fraction(-3, 4)]) == (2, 0, -3)
    assert clear_denominators([0, -2, 4]) == (0, 1, -2)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.integers(1, 3))
@settings(max_examples=50)
def test_squarefree_kernel_reconstructs(roots, mult):
    p = Poly([5])
    for r in roots:
        p = p * Poly([-r, 1]) ** mult
    core, root = squarefree_kernel(p)
    assert core * root * root * p.lc == p
    for g, _ in squarefree_factorization(core):
        assert _ == 1


def test_format_poly():
    assert format_poly([1, -4], "z") == "1 - 4*z"
    assert format_poly([0, 0, 1], "z") == "z^2"
    assert format_poly([Fraction(-1, 2), 0, 3], "n") == "-1/2 + 3*n^2"
    assert format_poly([], "z") == "0"
