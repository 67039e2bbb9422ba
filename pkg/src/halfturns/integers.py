"""Algebraic integers of small degree with one complex pair and bounded real conjugates."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from flint import fmpz_poly

from . import balls
from .balls import working_precision
from .polynomials import Poly, count_real_roots, gcd, real_roots_in_closed

MAX_DEGREE_GUARD = 4


def coefficient_box(degree: int, complex_bound, real_bound) -> list[int]:
    """Bounds |e_k| <= e_k(B, B, R, ..., R) on the elementary symmetric functions.

    Returns the integer bound for the coefficient of t^(degree - k), k = 1..degree.
    """
    b, r = balls.as_rational(complex_bound), balls.as_rational(real_bound)
    mods = [b] if degree == 1 else [b, b] + [r] * (degree - 2)
    out = []
    for k in range(1, degree + 1):
        e = sum((math.prod(c) for c in itertools.combinations(mods, k)), Fraction(0))
        out.append(math.floor(e))
    return out


def _numeric_prefilter(polys: np.ndarray, degree: int, complex_bound: float, real_bound: float) -> np.ndarray:
    """Loose floating-point screen; only discards polynomials far from satisfying the constraints."""
    if degree == 1:
        return np.abs(polys[:, 0]) <= complex_bound + 1e-9
    n = len(polys)
    comp = np.zeros((n, degree, degree))
    comp[:, 0, :] = -polys  # coefficients of t^(d-1), ..., t^0
    comp[:, np.arange(1, degree), np.arange(0, degree - 1)] = 1.0
    roots = np.linalg.eigvals(comp)
    slack = 1e-3  # generous: eigenvalues of clustered roots are only accurate to ~eps^(1/m)
    mod = np.abs(roots)
    keep = np.all(mod <= max(complex_bound, real_bound) + slack, axis=1)
    big = mod > real_bound + slack
    keep &= big.sum(axis=1) <= 2
    return keep


def _exact_modulus_equal(f: Poly, b2: Fraction) -> bool:
    """|z|^2 = b2 for a non-real root z: conj(z) = b2 / z is then a common root of f and t^n f(b2 / t)."""
    return gcd(f, f.compose_reciprocal(b2)).degree > 0


def satisfies_constraints(f: Poly, complex_bound, real_bound, precision: int = 64) -> bool:
    """Certified check of the root-location constraints for an irreducible monic integer f.

    Root balls come from flint's isolation, which returns real roots of an
    integer polynomial with an exactly zero imaginary part. Comparisons a
    ball cannot settle fall back to Sturm counts or exact tests.
    """
    n = f.degree
    cb, rb = balls.as_rational(complex_bound), balls.as_rational(real_bound)
    if n == 1:
        return abs(f.coeffs[0]) <= cb
    with working_precision(precision):
        roots = [z for z, _ in fmpz_poly(f.int_coeffs()).complex_roots()]
        real = [z.real for z in roots if z.imag.is_zero()]
        nonreal = [z for z in roots if not z.imag.is_zero()]
        if len(real) != n - 2 or len(nonreal) != 2:
            return False
        r = balls.real_ball(rb)
        for x in real:
            if abs(x) > r:
                return False
            if not abs(x) < r:
                return real_roots_in_closed(f, -rb, rb) == n - 2
        z = nonreal[0]
        m2 = z.real * z.real + z.imag * z.imag
        b2 = balls.real_ball(cb * cb)
        if m2 < b2:
            return True
        if m2 > b2:
            return False
    return _exact_modulus_equal(f, cb * cb)


def satisfies_constraints_sturm(f: Poly, complex_bound, real_bound) -> bool:
    """Second route for the real-root part (Sturm counts) plus the pair check at doubled precision."""
    n = f.degree
    if n == 1:
        return abs(f.coeffs[0]) <= balls.as_rational(complex_bound)
    rb = balls.as_rational(real_bound)
    if count_real_roots(f) != n - 2 or real_roots_in_closed(f, -rb, rb) != n - 2:
        return False
    return satisfies_constraints(f, complex_bound, real_bound, precision=128)


def _irreducible(coeffs: list[int]) -> bool:
    _, factors = fmpz_poly(coeffs).factor()
    return len(factors) == 1 and factors[0][1] == 1


def enumerate_bounded_algebraic_integers(
    max_degree: int,
    complex_bound=Fraction(32, 5),
    real_conjugate_bound=2,
    degree_guard: int = MAX_DEGREE_GUARD,
    min_degree: int = 1,
) -> list[Poly]:
    """Minimal polynomials of algebraic integers with the required conjugate layout.

    Degree 1: integers c with |c| <= complex_bound. Degree n >= 2: exactly one
    non-real conjugate pair, of modulus <= complex_bound, and n - 2 real
    conjugates in [-real_conjugate_bound, real_conjugate_bound].
    """
    if max_degree > degree_guard:
        raise ValueError(f"max_degree {max_degree} exceeds the guard {degree_guard}")
    cb, rb = balls.as_rational(complex_bound), balls.as_rational(real_conjugate_bound)
    out: list[Poly] = []
    for n in range(max(1, min_degree), max_degree + 1):
        box = coefficient_box(n, cb, rb)
        grid = np.array(list(itertools.product(*(range(-m, m + 1) for m in box))), dtype=float)
        if len(grid) == 0:
            continue
        keep = _numeric_prefilter(grid, n, float(cb), float(rb))
        for row in grid[keep]:
            ints = [int(c) for c in row]
            coeffs = ints[::-1] + [1]  # lowest degree first
            if n > 1 and not _irreducible(coeffs):
                continue
            f = Poly(coeffs)
            if satisfies_constraints(f, cb, rb):
                out.append(f)
    return out
