"""Certified ball arithmetic helpers.

Midpoint-radius balls come from python-flint (``arb`` for reals, ``acb`` for
complex numbers). Flint keeps its working precision in one process-wide
context; :func:`working_precision` serialises changes to it. Precision only
affects how tight a ball is, never whether it encloses the exact value, so a
thread seeing another thread's precision still gets sound results.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from fractions import Fraction
from numbers import Rational

import flint
from flint import acb, arb, fmpq

ComplexBall = acb
RealBall = arb

DEFAULT_PRECISION = int(os.environ.get("HALFTURNS_PRECISION", "128"))
DEFAULT_PRECISION_CAP = 8192

_lock = threading.RLock()


@contextmanager
def working_precision(bits: int):
    if bits < 2:
        raise ValueError(f"precision must be at least 2 bits, got {bits}")
    with _lock:
        old = flint.ctx.prec
        flint.ctx.prec = bits
        try:
            yield
        finally:
            flint.ctx.prec = old


def precision_ladder(start: int, cap: int):
    """Yield start, 2*start, ... up to and including cap."""
    bits = start
    while True:
        yield min(bits, cap)
        if bits >= cap:
            return
        bits *= 2


def to_fmpq(q) -> fmpq:
    q = Fraction(q)
    return fmpq(q.numerator, q.denominator)


def real_ball(x) -> arb:
    if isinstance(x, arb):
        return x
    if isinstance(x, fmpq):
        return arb(x)
    if isinstance(x, (int, Rational)):
        return arb(to_fmpq(x))
    if isinstance(x, float):
        return arb(to_fmpq(Fraction(x)))
    raise TypeError(f"cannot make a real ball from {type(x).__name__}")


def complex_ball(x) -> acb:
    """Enclose a number: int, Fraction, float, complex, arb, acb or a (re, im) pair."""
    if isinstance(x, acb):
        return x
    if isinstance(x, arb):
        return acb(x)
    if isinstance(x, complex):
        return acb(real_ball(x.real), real_ball(x.imag))
    if isinstance(x, tuple) and len(x) == 2:
        return acb(real_ball(x[0]), real_ball(x[1]))
    return acb(real_ball(x))


def exact_fraction(x: arb) -> Fraction:
    """Exact value of a zero-radius arb (midpoints and radii are dyadic)."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def interval(x: arb) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of a real ball."""
    mid = exact_fraction(x.mid())
    rad = exact_fraction(x.rad())
    return mid - rad, mid + rad


def contains_fraction(x: arb, q) -> bool:
    lo, hi = interval(x)
    return lo <= Fraction(q) <= hi


def complex_contains(z: acb, re, im=0) -> bool:
    return contains_fraction(z.real, re) and contains_fraction(z.imag, im)


def sign(x: arb) -> int | None:
    """Certified sign of a real ball, or None when the ball straddles 0."""
    if x > 0:
        return 1
    if x < 0:
        return -1
    if x.is_zero():
        return 0
    return None


def hull(lo, hi) -> arb:
    """Smallest ball (at current precision) containing the rational interval [lo, hi]."""
    return real_ball(lo).union(real_ball(hi))


def radius_float(z) -> float:
    """Largest component radius as a float, for reports."""
    if isinstance(z, arb):
        return float(z.rad())
    return max(float(z.real.rad()), float(z.imag.rad()))


def touches_negative_axis(z: acb) -> bool:
    """True unless the ball certifiably avoids the closed negative real half-axis."""
    if z.imag > 0 or z.imag < 0:
        return False
    return not (z.real > 0)


def sqrt_near(z: acb) -> acb:
    """A square root of z, continuous across the principal branch cut.

    Away from the negative real axis this is the principal root. Near it, the
    root is taken on the branch of the principal root of the exact midpoint,
    so an input ball straddling the cut does not blow up into a ball holding
    both roots.
    """
    if not touches_negative_axis(z):
        return z.sqrt()
    m = acb(z.mid())
    if m == 0:
        return z.sqrt()
    s0 = m.sqrt()
    return s0 * (z / m).sqrt()


def to_complex(z: acb) -> complex:
    return complex(float(z.real.mid()), float(z.imag.mid()))


def as_rational(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string or float (floats read as their shortest repr, so 6.4 -> 32/5)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, fmpq):
        return Fraction(int(x.p), int(x.q))
    return Fraction(x)
