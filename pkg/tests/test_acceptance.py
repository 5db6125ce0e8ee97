"""Acceptance suite: one recorded verdict per criterion, at its stated tolerance.

Run directly with ``python3 tests/test_acceptance.py`` for the verdict lines only.
"""

import random
import sys
import time
from fractions import Fraction

import pytest
import sympy

from gfguess.exceptions import DependentRows
from gfguess.lattice import algdep, lll
from gfguess.numerics import Fixed, Poly, primitive_part
from gfguess.pipeline import NEGATIVE, PipelineConfig, run_pipeline
from gfguess.reconstruct import BivariatePoly, assemble_bivariate, direct_algeq, solve_closed_form
from gfguess.reconstruct import verify_candidate
from gfguess.recurrence import extend_sequence, fit_recurrence
from gfguess.series import eval_at_inverse_int, series_from_algebraic
from known_sequences import CATALAN, MOTZKIN, PI_DIGITS, PLANAR_MAPS, TABLE, TABLE_RADICANDS, TOURNAMENT
from known_sequences import TOURNAMENT_EQUATION, TOURNAMENT_POLYS, TOURNAMENT_VALUE_DECIMALS, UNREACHABLE
from oracles import determinant, lll_conditions, matmul, real_root_bisect, shortest_vector_exact

CATALAN_ROWS = [[1], [-1], [0, 1]]


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def _same_up_to_constant(a: Poly, b: Poly) -> bool:
    pa, pb = primitive_part(a.coeffs)[1], primitive_part(b.coeffs)[1]
    return pa == pb or pa == tuple(-c for c in pb)


def test_c1_catalan_end_to_end(acceptance_log):
    def run():
        P = direct_algeq(CATALAN, 2, 1)
        cf = solve_closed_form(P, CATALAN[0])
        return P, cf, series_from_algebraic(P, CATALAN[0], len(CATALAN))

    (P, cf, s), dt = _timed(run)
    ok = (
        P.int_rows() == CATALAN_ROWS
        and str(cf) == "(1 - (1 - 4*z)^(1/2))/(2*z)"
        and list(s.coeffs) == CATALAN
        and list(cf.series(len(CATALAN)).coeffs) == CATALAN
        and dt < 5
    )
    assert acceptance_log("C1 Catalan end-to-end", ok, f"{P}; y = {cf}; {dt:.2f}s")


def test_c2_planar_map_recurrence(acceptance_log):
    def run():
        rec = fit_recurrence(PLANAR_MAPS)
        return rec, extend_sequence(rec, len(PLANAR_MAPS) - 1)

    (rec, ext), dt = _timed(run)
    ok = rec is not None and rec.order == 2 and list(ext) == PLANAR_MAPS and dt < 5
    assert acceptance_log("C2 planar map recurrence", ok, f"order {rec and rec.order}, {dt:.2f}s")


def test_c3_tournament_digits(acceptance_log):
    rec = fit_recurrence(TOURNAMENT)
    v, dt = _timed(lambda: eval_at_inverse_int(rec, 100, 200))
    got = v.digits()[:200]
    want = ("1" + TOURNAMENT_VALUE_DECIMALS)[:200]
    agree = next((i for i, (a, b) in enumerate(zip(got, want)) if a != b), 200)
    ok = got == want and dt < 30
    assert acceptance_log("C3 tournament value at 1/100", ok, f"{agree}/200 digits agree, {dt:.2f}s")


def test_c4_tournament_algdep(acceptance_log):
    rec = fit_recurrence(TOURNAMENT)

    def run():
        return {m: algdep(eval_at_inverse_int(rec, m, 200), 2) for m in TOURNAMENT_POLYS}

    got, dt = _timed(run)
    assert TOURNAMENT_POLYS[100] == (9131435376040000, -9041033588479200, 922556408004)
    # the printed polynomials carry a content of 4 or 16 at some even m
    bad = [m for m, c in TOURNAMENT_POLYS.items() if got[m] != primitive_part(c)[1]]
    ok = not bad and dt < 60
    assert acceptance_log("C4 tournament algdep m=100..111", ok, f"mismatches {bad}, {dt:.2f}s")


def test_c5_tournament_assembly(acceptance_log):
    ms = sorted(TOURNAMENT_POLYS)

    def run():
        P = assemble_bivariate([TOURNAMENT_POLYS[m] for m in ms], ms)
        return P, verify_candidate(P, TOURNAMENT)

    (P, v), dt = _timed(run)
    ok = P.int_rows() == TOURNAMENT_EQUATION and v.passed and v.valuation >= 19
    assert acceptance_log("C5 tournament assembly", ok, f"valuation {v.valuation}, {dt:.2f}s")


@pytest.mark.parametrize(
    "name",
    [pytest.param(n, marks=pytest.mark.xfail(strict=True, reason="no checkable recurrence")) if n in UNREACHABLE else n
     for n in TABLE],
)
def test_c6_table_regression(acceptance_log, name):
    terms = TABLE[name]
    r, dt = _timed(lambda: run_pipeline(PipelineConfig(), terms))
    ok = r.status == "conjecture-found" and r.equation.y_degree <= 2 and dt < 60
    detail = f"{r.status} via {r.route or r.stage}, {dt:.2f}s"
    if ok:
        s = series_from_algebraic(r.equation, terms[0], len(terms))
        ok = list(s.coeffs) == terms
        if name in TABLE_RADICANDS:
            cf = r.closed_form
            ok = ok and cf is not None and _same_up_to_constant(cf.radicand, Poly(TABLE_RADICANDS[name]))
            detail += f", radicand {cf.radicand if cf else None}"
    assert acceptance_log(f"C6 table {name}", ok, detail)


def _random_basis(rng):
    while True:
        n = rng.randint(1, 6)
        b = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        if determinant(b) != 0:
            return b


def test_c7a_lll_random_bases(acceptance_log):
    rng = random.Random(20261015)
    failures = 0
    for _ in range(200):
        b = _random_basis(rng)
        n = len(b)
        try:
            red = lll(b)
        except DependentRows:
            failures += 1
            continue
        ok = (
            lll_conditions(red.basis)
            and matmul(red.transform, b) == red.basis
            and abs(determinant(red.transform)) == 1
            and sum(x * x for x in red.basis[0]) <= 2 ** (n - 1) * shortest_vector_exact(red.basis)
        )
        failures += not ok
    assert acceptance_log("C7 LLL on 200 random bases", failures == 0, f"{failures} failures")


def _planted(rng):
    z = sympy.Symbol("z")
    while True:
        deg = rng.randint(1, 4)
        c = [rng.randint(-100, 100) for _ in range(deg + 1)]
        if c[-1] == 0:
            continue
        g = 0
        for x in c:
            g = sympy.gcd(g, x)
        if g != 1:
            continue
        P = sympy.Poly(list(reversed(c)), z)
        if not P.is_irreducible:
            continue
        roots = P.intervals()
        if roots:
            (lo, hi), _ = rng.choice(roots)
            return c, lo, hi


def test_c7b_algdep_planted(acceptance_log):
    rng = random.Random(7)
    misses = []
    for _ in range(100):
        c, lo, hi = _planted(rng)
        if lo == hi:
            root = Fraction(int(lo.p), int(lo.q))
        else:
            root = real_root_bisect(c, Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q)), 160)
        alpha = Fixed(round(root * 10**150), 150)
        want = primitive_part(c)[1]
        got = algdep(alpha, 4)
        if got is None or (got != want and got != tuple(-x for x in want)):
            misses.append(c)
    rate = 100 - len(misses)
    assert acceptance_log("C7 algdep planted recovery", not misses, f"{rate}/100 recovered")


@pytest.mark.parametrize(
    "name, terms, deg_z",
    [("Catalan", CATALAN, 1), ("Motzkin", MOTZKIN, 2), ("all-ones", [1] * 12, 1), ("tournament", TOURNAMENT, 8)],
)
def test_c7c_route_agreement(acceptance_log, name, terms, deg_z):
    lattice = run_pipeline(PipelineConfig(mode="lattice-only"), terms)
    ext = extend_sequence(fit_recurrence(terms), 39)
    deg_y = lattice.equation.y_degree if lattice.equation is not None else 2
    direct = direct_algeq(ext, deg_y, deg_z)
    ok = lattice.status == "conjecture-found" and direct is not None and direct == lattice.equation
    assert acceptance_log(f"C7 route agreement {name}", ok, f"{lattice.equation} / {direct}")


def test_c7d_pi_negative_control(acceptance_log):
    r = run_pipeline(PipelineConfig(), PI_DIGITS)
    ok = r.status in NEGATIVE and not r.found
    assert acceptance_log("C7 pi digits negative control", ok, f"{r.status} at {r.stage}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
