from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gfguess.exceptions import DivergenceSuspected, NonSimpleRoot, NoRoot
from gfguess.numerics import Poly
from gfguess.reconstruct import BivariatePoly
from gfguess.recurrence import PRecurrence, fit_recurrence
from gfguess.series import (
    TruncatedSeries,
    eval_at_inverse_int,
    from_sequence,
    mul_trunc,
    partial_sum_at_inverse_int,
    pow_trunc,
    series_from_algebraic,
    substitute_series,
)
from known_sequences import CATALAN, MOTZKIN, TOURNAMENT, TOURNAMENT_EQUATION
from oracles import convolve, long_division, sqrt_digits

CATALAN_EQ = BivariatePoly.from_rows([[1], [-1], [0, 1]])
MOTZKIN_EQ = BivariatePoly.from_rows([[1], [-1, 1], [0, 0, 1]])

series = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), max_size=8).map(
    lambda c: TruncatedSeries(c, len(c))
)


def test_from_sequence():
    s = from_sequence([1, 1, 2, 5])
    assert s.coeffs == (1, 1, 2, 5) and s.order == 4
    empty = from_sequence([])
    assert empty.order == 0 and empty.is_zero()


def test_no_coefficient_beyond_order():
    s = TruncatedSeries([1, 2], 2)
    with pytest.raises(IndexError):
        s[2]


def test_product_truncates_at_smaller_order():
    a = TruncatedSeries([1, 1], 3)
    b = TruncatedSeries([1, -1], 3)
    assert mul_trunc(a, b).coeffs == (1, 0, -1)
    assert mul_trunc(a, TruncatedSeries([1], 1)).order == 1


def test_pow_zero_is_one():
    assert pow_trunc(TruncatedSeries([1, 1], 4), 0).coeffs == (1, 0, 0, 0)


def test_catalan_square_identity():
    S = from_sequence(CATALAN[:20])
    sq = pow_trunc(S, 2)
    # z S^2 = S - 1
    assert sq.shift(1).truncate(20).coeffs == (S - TruncatedSeries([1], 20)).coeffs


@given(series, series)
def test_product_matches_convolution(a, b):
    n = min(a.order, b.order)
    assert list(mul_trunc(a, b).coeffs) == convolve(a.coeffs, b.coeffs, n)


@given(series, series, series)
def test_product_commutes_and_associates(a, b, c):
    assert mul_trunc(a, b) == mul_trunc(b, a)
    assert mul_trunc(mul_trunc(a, b), c) == mul_trunc(a, mul_trunc(b, c))


@given(series.filter(lambda s: s.order and s.coeffs[0]))
def test_inverse(a):
    one = mul_trunc(a, a.inverse())
    assert one.coeffs == (1,) + (0,) * (a.order - 1)


def test_substitute_catalan_is_zero():
    assert substitute_series(CATALAN_EQ, from_sequence(CATALAN[:20])).is_zero()


def test_substitute_y_is_identity():
    S = from_sequence(MOTZKIN)
    assert substitute_series(BivariatePoly.from_rows([[0], [1]]), S) == S


def test_substitute_motzkin_against_convolution():
    r = substitute_series(MOTZKIN_EQ, from_sequence(MOTZKIN[:7]))
    assert r.is_zero() and r.order == 7
    sq = convolve(MOTZKIN, MOTZKIN, 7)
    manual = [
        (1 if n == 0 else 0) - MOTZKIN[n] + (MOTZKIN[n - 1] if n else 0) + (sq[n - 2] if n >= 2 else 0)
        for n in range(7)
    ]
    assert manual == [0] * 7


def test_series_root_catalan():
    assert list(series_from_algebraic(CATALAN_EQ, 1, 21).coeffs) == CATALAN


def test_series_root_geometric():
    P = BivariatePoly.from_rows([[-1], [1, -1]])
    assert list(series_from_algebraic(P, 1, 5).coeffs) == [1] * 5


def test_series_root_tournament():
    P = BivariatePoly.from_rows(TOURNAMENT_EQUATION)
    assert list(series_from_algebraic(P, 1, 21).coeffs) == TOURNAMENT


def test_series_root_errors():
    with pytest.raises(NoRoot):
        series_from_algebraic(CATALAN_EQ, 2, 5)
    # y^2 - 2y + 1 + z: double root at the origin
    with pytest.raises(NonSimpleRoot):
        series_from_algebraic(BivariatePoly.from_rows([[1, 1], [-2], [1]]), 1, 5)


@given(st.integers(-3, 3), st.integers(1, 3), st.integers(1, 12))
@settings(max_examples=30)
def test_series_root_round_trip(c, a0, n):
    # (y - a0)(1 + c z y) - z = 0 has a simple root at y = a0
    P = BivariatePoly.from_rows([[-a0, -1], [1, -c * a0], [0, c]])
    S = series_from_algebraic(P, a0, n)
    assert substitute_series(P, S).is_zero()


def test_eval_geometric():
    rec = fit_recurrence([1] * 10)
    x = eval_at_inverse_int(rec, 10, 20)
    assert str(x) == "1.11111111111111111111"


def test_eval_catalan_against_square_root():
    rec = fit_recurrence(CATALAN)
    x = eval_at_inverse_int(rec, 100, 50)
    # (1 - sqrt(24/25)) / (2/100) = 50 - 10 sqrt(24)
    root = sqrt_digits(24, 60)
    expected = 50 * 10**60 - 10 * root
    assert abs(x.mantissa * 10**10 - expected) <= 10**10


def test_eval_tournament_leading_digits():
    rec = fit_recurrence(TOURNAMENT)
    assert str(eval_at_inverse_int(rec, 100, 30)).startswith("1.01010316782128237165520555616")


def test_refinement_is_monotone():
    rec = fit_recurrence(TOURNAMENT)
    lo = eval_at_inverse_int(rec, 101, 60)
    hi = eval_at_inverse_int(rec, 101, 110)
    assert abs(hi.rescale(60).mantissa - lo.mantissa) <= 1


def test_emitted_value_matches_exact_partial_sum():
    rec = fit_recurrence(TOURNAMENT)
    total, nterms = partial_sum_at_inverse_int(rec, 100, 80)
    exact = sum(Fraction(t, 100**n) for n, t in zip(range(nterms), rec.iter_terms()))
    assert total == exact
    x = eval_at_inverse_int(rec, 100, 80)
    assert abs(x.to_fraction() - total) <= Fraction(1, 10**80)


def test_fast_growth_is_reported():
    # a(n) = 200 a(n-1) grows faster than m = 100
    rec = PRecurrence((Poly([1]), Poly([200])), (Fraction(1),))
    with pytest.raises(DivergenceSuspected):
        eval_at_inverse_int(rec, 100, 50)


def test_eval_rational_geometric_digits():
    # a(n) = 3 a(n-1): S(1/7) = 7/4
    rec = PRecurrence((Poly([1]), Poly([3])), (Fraction(1),))
    x = eval_at_inverse_int(rec, 7, 40)
    digits, _ = long_division(7, 4, 40)
    assert x.mantissa == digits
