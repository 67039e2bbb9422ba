from __future__ import annotations

import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfturns import arith, klein
from halfturns.balls import complex_contains, to_complex, working_precision
from halfturns.candidates import QuadraticCandidate
from halfturns.errors import DegenerateCircle, DegenerateParams, DegenerateSymbol
from halfturns.numberfield import NumberField
from halfturns.rep import (
    Mat2,
    Params,
    build_regular,
    build_representation,
    complex_distance,
    diameter_circle,
    fixed_points,
    is_line_matrix,
    params_from_two_generator,
)

SQRT_M3 = NumberField.parse("t^2 + 3")
SQRT_M2 = NumberField.parse("t^2 + 2")
OMEGA = (SQRT_M3(-1) + SQRT_M3.gen) / 2  # -1/2 + sqrt(-3)/2

gauss = st.tuples(
    st.fractions(min_value=-8, max_value=8, max_denominator=50),
    st.fractions(min_value=-8, max_value=8, max_denominator=50),
)


def _traces(t):
    A, B, C = t.matrices
    with working_precision(t.precision):
        return (A @ B).trace(), (A @ C).trace(), (B @ C).trace()


def test_regular_traces_and_line_matrices():
    t = build_regular(OMEGA, 128)
    for m in t.matrices:
        assert is_line_matrix(m)
    target = complex(-0.5, 3**0.5 / 2)
    for tr in _traces(t):
        assert abs(to_complex(tr) - target) < 1e-30
    assert t.c12.overlaps(t.c21)


def test_general_traces_exact_field():
    p = Params(SQRT_M2.gen, SQRT_M2(3), SQRT_M2(1) + SQRT_M2.gen)
    t = build_representation(p, 128)
    for tr, want in zip(_traces(t), p.values):
        assert tr.overlaps(want.numeric(128))


def test_degenerate_rho0():
    with pytest.raises(DegenerateParams):
        build_regular(2)
    with pytest.raises(DegenerateParams):
        build_representation(Params(-2, 1, 1))


def test_square_is_minus_identity():
    t = build_regular(-7, 128)
    for m in t.matrices:
        sq = m @ m
        assert complex_contains(sq.m11, -1) and complex_contains(sq.m12, 0)


def test_fixed_points_and_diameter_circle():
    t = build_regular(-7, 128)
    c = diameter_circle(t.C, 128)
    p, q = fixed_points(t.C, 128)
    mid = (to_complex(p) + to_complex(q)) / 2
    assert abs(mid - to_complex(c.center)) < 1e-25
    assert abs(abs(to_complex(p) - to_complex(q)) / 2 - float(c.radius.mid())) < 1e-25


def test_diameter_circle_rejects_infinity():
    from flint import acb

    m = Mat2(acb(1j), acb(0), acb(0), acb(-1j))
    with pytest.raises(DegenerateCircle):
        diameter_circle(m)


def test_complex_distance_cosh():
    t = build_regular(-7, 128)
    mu = complex_distance(t.A, t.B, precision=128)
    with working_precision(128):
        err = abs(mu.cosh() - 3.5)
    assert err < 1e-30
    assert abs(cmath.cosh(to_complex(mu)) - 3.5) < 1e-12
    assert mu.real > 0


def test_two_generator_params_sign_convention():
    p = params_from_two_generator(3, 4, 5)
    assert p.values == (3, 4, -5)


@settings(max_examples=40, deadline=None)
@given(gauss, gauss, gauss)
def test_round_trip_numeric(r0, r1, r2):
    if r0 in ((2, 0), (-2, 0)) or r0 == (Fraction(2), Fraction(0)):
        return
    p = Params(*(x if x[1] else x[0] for x in (r0, r1, r2)))
    try:
        t = build_representation(p, 128)
    except DegenerateParams:
        return
    for tr, want in zip(_traces(t), p.balls(128)):
        assert tr.overlaps(want)
    for m in t.matrices:
        assert is_line_matrix(m)


# --- splitting constants and circle test ---------------------------------------


def test_phi_at_three():
    b = klein.annulus_bounds(3, 128)
    assert b.phi.overlaps(klein.balls.real_ball(Fraction(3, 8)))
    assert b.phi.rad() < 1e-30


def test_split_constants():
    sc = klein.compute_split_constants()
    lo, hi = klein.balls.interval(sc.beta_star)
    assert Fraction("2.4944") <= lo and hi <= Fraction("2.4946")
    assert hi - lo < Fraction(1, 10**11)
    assert sc.binding_equation == "R1(x) = 1/x"
    rlo, rhi = klein.balls.interval(sc.rho_star_computed)
    assert 6.38 <= rlo and rhi <= 6.40
    assert klein.certify_monotonicity()


def test_split_constants_fixed_point_oracle():
    # independent float solve of R1(x) = 1/x with the closed form
    import math

    def gap(x):
        phi = (1 + 1 / x**2) / (x * (1 - 1 / x**4))
        return math.sqrt(abs(1 - phi * phi)) - phi - 1 / x

    lo, hi = 2.0, 4.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if gap(lo) * gap(mid) <= 0:
            hi = mid
        else:
            lo = mid
    sc = klein.compute_split_constants()
    assert abs(lo - float(sc.beta_star.mid())) < 1e-9


def test_annulus_boundary_inclusive():
    assert klein.splits_by_annulus(Fraction(32, 5))
    assert not klein.splits_by_annulus(Fraction(32, 5) - Fraction(1, 10**30))
    assert klein.splits_by_annulus(-7)
    assert not klein.splits_by_annulus(OMEGA)


def test_minus_seven_witness():
    res = klein.circle_disjointness(build_regular(-7, 128))
    assert res.status == klein.DISJOINT
    assert res.witness == ("inside", "outside", "inside")


def test_omega_circles_cross():
    res = klein.circle_disjointness(build_regular(OMEGA, 128))
    assert res.status == klein.INTERSECTING


def test_two_plus_two_i_is_disjoint():
    # a regular parameter of modulus below rho* whose circles still separate
    res = klein.circle_disjointness(build_regular(QuadraticCandidate(4, 16).rho, 256))
    assert res.status == klein.DISJOINT
    assert res.witness == ("inside", "outside", "inside")


def test_scan_on_large_region_finds_nothing():
    out = klein.conjecture_scan([(7, 9, 0, 1)] * 3, "grid", 2, "rounded")
    assert out == []
    kept = klein.conjecture_scan([(7, 9, 0, 1)] * 3, "random", 5, "rounded", seed=3, keep_all=True)
    assert len(kept) == 5 and all(s.status == klein.DISJOINT for s in kept)


@settings(max_examples=40, deadline=None)
@given(gauss)
def test_annulus_implies_not_intersecting(z):
    rho = z if z[1] else z[0]
    if not klein.at_least(rho, "rounded"):
        return
    res = klein.circle_disjointness(build_regular(rho, 128))
    assert res.status != klein.INTERSECTING


@settings(max_examples=30, deadline=None)
@given(gauss, gauss, gauss)
def test_certificate_stable_under_precision_doubling(r0, r1, r2):
    p = Params(*(x if x[1] else x[0] for x in (r0, r1, r2)))
    try:
        lo = klein.circle_disjointness(build_representation(p, 128), 128)
        hi = klein.circle_disjointness(build_representation(p, 256), 256)
    except (DegenerateParams, DegenerateCircle, klein.PrecisionExhausted):
        return
    if lo.status != klein.UNDECIDED and hi.status != klein.UNDECIDED:
        assert lo.status == hi.status


# --- arithmeticity -----------------------------------------------------------


def test_hilbert_entries_sqrt_minus_two():
    t = SQRT_M2.gen
    h = arith.hilbert_entries(Params.regular(t))
    assert h.a == SQRT_M2(12)
    assert h.b == SQRT_M2(-40) + 8 * t


def test_hilbert_entries_minus_three():
    h = arith.hilbert_entries(Params.regular(-3))
    assert h.a == h.a.field(45) and h.b == h.b.field(4050)


def test_hilbert_entries_match_matrix_traces():
    p = Params(SQRT_M2.gen, SQRT_M2(3), SQRT_M2(1) + SQRT_M2.gen)
    h = arith.hilbert_entries(p, convention="matrix")
    t = build_representation(p, 256)
    with working_precision(256):
        g0, g1 = t.A @ t.B, t.A @ t.C
        g0s, g1s = g0 @ g0, g1 @ g1
        a = g0s.trace() ** 2 - 4
        comm = g0s @ g1s @ g0s.inverse() @ g1s.inverse()
        b = comm.trace() - 2
    assert a.overlaps(h.a.numeric(256))
    assert b.overlaps(h.b.numeric(256))
    # the displayed entries belong to the negated triple
    disp = arith.hilbert_entries(p)
    assert not b.overlaps(disp.b.numeric(256))
    neg = Params(*(-v for v in p.values))
    assert arith.hilbert_entries(neg, convention="matrix").b == disp.b


def test_hilbert_degenerate():
    with pytest.raises(DegenerateSymbol):
        arith.hilbert_entries(Params(0, 1, 1))


def test_verdicts():
    r = arith.arithmeticity_test(Params.regular(SQRT_M2.gen))
    assert r.verdict == "nearly_arithmetic_candidate"
    assert r.invariant_field["label"] == "Q(√-2)"
    assert (r.signature.real_places, r.signature.complex_places) == (0, 1)
    assert arith.arithmeticity_test(Params.regular(-3)).verdict == "fails_condition_2"
    r7 = arith.arithmeticity_test(Params.regular(-7))
    assert r7.verdict == "splits_free_product"
    assert "annulus" in r7.free_product_method
    half = arith.arithmeticity_test(Params.regular(SQRT_M2.gen / 2))
    assert half.verdict == "fails_condition_1"


def test_gaussian_tuple_params():
    k = arith.invariant_trace_field(Params.regular((Fraction(1), Fraction(1))))
    assert k.label == "Q(√-1)"


@pytest.mark.parametrize("k,d", [(-1, 3), (0, 8), (1, 7), (-3, 3), (0, 4)])
def test_verdict_invariant_under_conjugation(k, d):
    rho = QuadraticCandidate(k, d).rho
    p = Params.regular(rho)
    v1 = arith.arithmeticity_test(p).verdict
    v2 = arith.arithmeticity_test(p.conjugate()).verdict
    assert v1 == v2
