from __future__ import annotations

import random
from fractions import Fraction

import pytest
from flint import fmpz_poly
from hypothesis import given, settings
from hypothesis import strategies as st

from halfturns.balls import as_rational, contains_fraction, interval, precision_ladder, real_ball, working_precision
from halfturns.errors import NonSquarefree
from halfturns.numberfield import (
    NumberField,
    exact_abs_squared,
    is_algebraic_integer,
    minimal_polynomial,
    parse_polynomial,
    real_embedding_sign,
    signature,
    subfield_generated,
)
from halfturns.polynomials import Poly, count_real_roots, gcd, isolate_real_roots, is_squarefree, real_roots_in_closed

fractions = st.fractions(max_denominator=1000).filter(lambda q: abs(q) < 10**6)


def test_as_rational_reads_decimal_text():
    assert as_rational(6.4) == Fraction(32, 5)
    assert as_rational("6.4") == Fraction(32, 5)
    assert as_rational(Fraction(1, 3)) == Fraction(1, 3)
    assert Fraction(6.4) != Fraction(32, 5)


def test_precision_ladder():
    assert list(precision_ladder(64, 512)) == [64, 128, 256, 512]
    assert list(precision_ladder(100, 150)) == [100, 150]


def test_working_precision_restores():
    import flint

    old = flint.ctx.prec
    with working_precision(300):
        assert flint.ctx.prec == 300
    assert flint.ctx.prec == old


@settings(max_examples=300, deadline=None)
@given(fractions, fractions, fractions)
def test_ball_contains_exact_result(a, b, c):
    with working_precision(64):
        x = real_ball(a) * real_ball(b) + real_ball(c)
        assert contains_fraction(x, a * b + c)
        if c != 0:
            y = (real_ball(a) - real_ball(b)) / real_ball(c)
            assert contains_fraction(y, (a - b) / c)
        lo, hi = interval(x)
        assert lo <= a * b + c <= hi


def test_poly_arithmetic():
    p = parse_polynomial("t^3 - 2*t + 1")
    assert p == Poly([1, -2, 0, 1])
    q, r = divmod(p, Poly([-1, 1]))
    assert r.is_zero() and q * Poly([-1, 1]) == p
    assert gcd(p, p.derivative()).degree == 0
    assert not is_squarefree(Poly([1, -2, 1]))


def test_sturm_counts_known_cases():
    assert count_real_roots(parse_polynomial("t^2 + 1")) == 0
    assert count_real_roots(parse_polynomial("t^3 - t")) == 3
    assert real_roots_in_closed(parse_polynomial("t^2 - 4"), -2, 2) == 2
    assert real_roots_in_closed(parse_polynomial("t^2 - 4"), -1, 2) == 1


def test_isolation_brackets_roots():
    p = parse_polynomial("t^3 - 2")
    (r,) = isolate_real_roots(p)
    r = r.refine_to(Fraction(1, 10**12))
    assert r.lo ** 3 <= 2 <= r.hi**3
    with pytest.raises(NonSquarefree):
        isolate_real_roots(Poly([1, -2, 1]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=9))
def test_sturm_matches_flint_root_count(cs):
    cs = cs[:-1] + [cs[-1] or 1]
    p = Poly(cs)
    if p.degree < 1 or not is_squarefree(p):
        return
    roots = fmpz_poly(cs).complex_roots()
    numeric = sum(1 for z, _ in roots if z.imag.is_zero())
    assert count_real_roots(p) == numeric
    assert len(isolate_real_roots(p)) == numeric


def test_number_field_basics():
    k = NumberField.parse("t^2 + 3")
    t = k.gen
    assert t * t == k(-3)
    w = (k(-1) + t) / 2
    assert w**3 == k(1)
    assert minimal_polynomial(w) == parse_polynomial("t^2 + t + 1")
    assert is_algebraic_integer(w)
    assert not is_algebraic_integer(t / 2)
    assert exact_abs_squared(w) == 1
    z = w.numeric(128)
    assert z.imag > 0


def test_reducible_field_rejected():
    with pytest.raises(ValueError):
        NumberField.parse("t^2 - 4")


def test_subfield_of_degree_four_field():
    k = NumberField.parse("t^4 - 2")
    t = k.gen
    sub = subfield_generated(k, [t * t])
    assert sub.degree == 2
    assert t * t in sub and t not in sub
    assert signature(sub.polynomial).real_places == 2
    signs = sorted(real_embedding_sign(t * t, e) for e in sub.real_places())
    assert signs == [-1, 1]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_subfield_idempotent(cs):
    k = NumberField.parse("t^4 - 2")
    x = k(Poly(cs))
    sub = subfield_generated(k, [x * x])
    again = subfield_generated(k, list(sub.basis))
    assert again.degree == sub.degree
    assert subfield_generated(k, [sub.primitive]).degree == sub.degree
    assert all(b in again for b in sub.basis)


def test_random_ball_fuzz_small():
    rng = random.Random(7)
    for _ in range(200):
        a = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        with working_precision(64):
            assert contains_fraction(real_ball(a) ** 3, a**3)
