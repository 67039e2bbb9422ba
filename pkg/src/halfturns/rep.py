"""SL(2,C) representation of a group generated by three half-turns.

Parameters are rho_k = -2 cosh(mu_k), the traces tr(AB), tr(AC), tr(BC) of
the normalized line matrices. The triple is normalised so that A fixes
+-1/beta and B fixes +-beta with |beta| >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from flint import acb, arb

from . import balls
from .balls import DEFAULT_PRECISION, complex_ball, sqrt_near, working_precision
from .errors import DegenerateCircle, DegenerateLines, DegenerateParams, PrecisionExhausted
from .numberfield import FieldElement, NumberField, parse_complex, parse_element

Value = Union[FieldElement, int, Fraction, complex, tuple, acb]

I = acb(0, 1)


# --- matrices -------------------------------------------------------------


@dataclass(frozen=True)
class Mat2:
    m11: acb
    m12: acb
    m21: acb
    m22: acb

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2(
            self.m11 * other.m11 + self.m12 * other.m21,
            self.m11 * other.m12 + self.m12 * other.m22,
            self.m21 * other.m11 + self.m22 * other.m21,
            self.m21 * other.m12 + self.m22 * other.m22,
        )

    def __neg__(self) -> Mat2:
        return Mat2(-self.m11, -self.m12, -self.m21, -self.m22)

    def trace(self) -> acb:
        return self.m11 + self.m22

    def det(self) -> acb:
        return self.m11 * self.m22 - self.m12 * self.m21

    def inverse(self) -> Mat2:
        """Adjugate; the inverse for determinant-one matrices."""
        return Mat2(self.m22, -self.m12, -self.m21, self.m11)

    def entries(self) -> tuple[acb, acb, acb, acb]:
        return (self.m11, self.m12, self.m21, self.m22)

    def max_radius(self) -> float:
        return max(balls.radius_float(z) for z in self.entries())

    @classmethod
    def identity(cls) -> Mat2:
        return cls(acb(1), acb(0), acb(0), acb(1))

    def as_dict(self) -> dict:
        out = {}
        for name, z in zip(("m11", "m12", "m21", "m22"), self.entries()):
            out[name] = ball_dict(z)
        return out


# A normalized line matrix: trace 0, determinant 1, M @ M = -I.
LineMatrix = Mat2


def ball_dict(z: acb) -> dict:
    return {
        "re": float(z.real.mid()),
        "im": float(z.imag.mid()),
        "radius": balls.radius_float(z),
    }


def is_line_matrix(m: Mat2) -> bool:
    """Certified containment of tr = 0 and det = 1."""
    return m.trace().contains(0) and m.det().contains(1)


# --- parameters -----------------------------------------------------------


@dataclass(frozen=True)
class Params:
    """(rho0, rho1, rho2); exact when all three live in one number field."""

    rho0: Value
    rho1: Value
    rho2: Value

    def __post_init__(self):
        fields = {r.field for r in self.values if isinstance(r, FieldElement)}
        if len(fields) > 1:
            raise ValueError("exact parameters must share one ambient field")
        if fields:
            k = next(iter(fields))
            for name in ("rho0", "rho1", "rho2"):
                v = getattr(self, name)
                if isinstance(v, (int, Fraction)):
                    object.__setattr__(self, name, k(v))

    @classmethod
    def regular(cls, rho: Value) -> Params:
        return cls(rho, rho, rho)

    @classmethod
    def parse(cls, rho0: str, rho1: str, rho2: str, field: NumberField | None = None) -> Params:
        """Element grammar in ``field`` when given, else decimal complex literals ``a+bi``."""
        if field is not None:
            return cls(*(parse_element(s, field) for s in (rho0, rho1, rho2)))
        return cls(*(_gaussian(parse_complex(s)) for s in (rho0, rho1, rho2)))

    @property
    def values(self) -> tuple[Value, Value, Value]:
        return (self.rho0, self.rho1, self.rho2)

    @property
    def exact(self) -> bool:
        if all(isinstance(r, FieldElement) for r in self.values):
            return True
        return all(isinstance(r, (int, Fraction)) for r in self.values)

    @property
    def field(self) -> NumberField | None:
        if not self.exact:
            return None
        if isinstance(self.rho0, FieldElement):
            return self.rho0.field
        return NumberField.rationals()

    def exact_values(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        if not self.exact:
            raise ValueError("parameters are numeric; exact mode needs a number field")
        k = self.field
        return tuple(k(r) for r in self.values)

    def is_regular(self) -> bool:
        return self.rho0 == self.rho1 == self.rho2 and not isinstance(self.rho0, acb)

    def balls(self, prec: int = DEFAULT_PRECISION) -> tuple[acb, acb, acb]:
        return tuple(value_ball(r, prec) for r in self.values)

    def refinable(self) -> bool:
        """True when balls can be recomputed at higher precision."""
        return not any(isinstance(r, acb) for r in self.values)

    def conjugate(self) -> Params:
        return Params(*(conjugate_value(r) for r in self.values))

    def labels(self) -> list[str]:
        return [value_str(r) for r in self.values]


def _gaussian(z: tuple[Fraction, Fraction]):
    re, im = z
    return re if im == 0 else (re, im)


def value_ball(r: Value, prec: int = DEFAULT_PRECISION) -> acb:
    if isinstance(r, FieldElement):
        return r.numeric(prec)
    with working_precision(prec):
        return complex_ball(r)


def value_str(r: Value) -> str:
    if isinstance(r, tuple):
        re, im = r
        return f"{re}{'+' if im >= 0 else '-'}{abs(im)}i"
    if isinstance(r, acb):
        return str(r)
    return str(r)


def conjugate_value(r: Value) -> Value:
    """Complex conjugate; exact when the field is closed under conjugation."""
    if isinstance(r, FieldElement):
        k = r.field
        if k.degree == 1:
            return r
        if k.degree == 2 and k.polynomial.coeffs[1] == 0 and k.polynomial.coeffs[0] > 0:
            # t^2 + D with D > 0: conjugation sends t to -t
            return k(r.coords[0]) - k(r.coords[1]) * k.gen
        raise ValueError("exact conjugation is only supported for Q and Q(sqrt(-D))")
    if isinstance(r, tuple):
        return (r[0], -r[1])
    if isinstance(r, complex):
        return r.conjugate()
    if isinstance(r, acb):
        return r.conjugate()
    return r


def _is_exactly(r: Value, target: int) -> bool | None:
    """Exact test r == target when r is exact, else None."""
    if isinstance(r, FieldElement):
        return r == target
    if isinstance(r, (int, Fraction)):
        return r == target
    if isinstance(r, tuple):
        return r[1] == 0 and r[0] == target
    if isinstance(r, complex):
        return r == target
    return None


def check_nondegenerate(r0: Value, ball: acb) -> None:
    for target in (2, -2):
        exact = _is_exactly(r0, target)
        if exact:
            raise DegenerateParams(f"rho0 = {target}: beta^4 = 1, the representation degenerates")
        if exact is None and (ball - target).contains(0):
            raise PrecisionExhausted("cannot certify rho0 != +-2 for this ball")


# --- triple ---------------------------------------------------------------


@dataclass(frozen=True)
class HalfTurnTriple:
    A: Mat2
    B: Mat2
    C: Mat2
    beta: acb
    c11: acb
    c12: acb
    c21: acb
    params: Params
    precision: int
    regular: bool = False

    @property
    def matrices(self) -> tuple[Mat2, Mat2, Mat2]:
        return (self.A, self.B, self.C)

    def rebuild(self, precision: int) -> HalfTurnTriple:
        builder = build_regular if self.regular else build_representation
        arg = self.params.rho0 if self.regular else self.params
        return builder(arg, precision=precision)

    def as_dict(self) -> dict:
        return {
            "precision_bits": self.precision,
            "params": self.params.labels(),
            "beta": ball_dict(self.beta),
            "A": self.A.as_dict(),
            "B": self.B.as_dict(),
            "C": self.C.as_dict(),
            "traces": {
                "tr(AB)": ball_dict((self.A @ self.B).trace()),
                "tr(AC)": ball_dict((self.A @ self.C).trace()),
                "tr(BC)": ball_dict((self.B @ self.C).trace()),
            },
        }


def _beta(r0: acb) -> acb:
    """beta with beta^4 + rho0 beta^2 + 1 = 0 and |beta| >= 1 when decidable."""
    disc = sqrt_near(r0 * r0 - 4)
    b2 = (-r0 + disc) / 2
    if abs(b2) < 1:
        b2 = (-r0 - disc) / 2
    return sqrt_near(b2)


def build_representation(params: Params, precision: int = DEFAULT_PRECISION) -> HalfTurnTriple:
    r0, r1, r2 = params.balls(precision)
    check_nondegenerate(params.rho0, r0)
    with working_precision(precision):
        beta = _beta(r0)
        denom = I / (beta * beta) - I * beta * beta
        c21 = (r1 / beta - r2 * beta) / denom
        c12 = (-r1 * beta + r2 / beta) / denom
        c11 = I * sqrt_near(c12 * c21 + 1)
        A = Mat2(acb(0), I / beta, I * beta, acb(0))
        B = Mat2(acb(0), I * beta, I / beta, acb(0))
        C = Mat2(c11, c12, c21, -c11)
    return HalfTurnTriple(A, B, C, beta, c11, c12, c21, params, precision)


def build_regular(rho: Value, precision: int = DEFAULT_PRECISION) -> HalfTurnTriple:
    """Simplified formulas for rho0 = rho1 = rho2; C is symmetric (c12 = c21)."""
    params = Params.regular(rho)
    r = params.balls(precision)[0]
    check_nondegenerate(params.rho0, r)
    with working_precision(precision):
        beta = _beta(r)
        b2 = beta * beta
        c21 = I * (1 / b2 + b2) / (1 / beta + beta)
        c11 = I * sqrt_near(c21 * c21 + 1)
        A = Mat2(acb(0), I / beta, I * beta, acb(0))
        B = Mat2(acb(0), I * beta, I / beta, acb(0))
        C = Mat2(c11, c21, c21, -c11)
    return HalfTurnTriple(A, B, C, beta, c11, c21, c21, params, precision, regular=True)


# --- lines, distances, circles -------------------------------------------


def rho_of(m1: Mat2, m2: Mat2) -> acb:
    return (m1 @ m2).trace()


def complex_distance(
    m1: Mat2, m2: Mat2, require_positive_real: bool = False, precision: int = DEFAULT_PRECISION
) -> acb:
    """mu with cosh(mu) = -tr(M1 M2)/2, Re mu >= 0 and Im mu in [0, 2 pi)."""
    with working_precision(precision):
        t = rho_of(m1, m2)
        if require_positive_real and ((t - 2).contains(0) or (t + 2).contains(0)):
            raise DegenerateLines("tr(M1 M2) = +-2: the lines share an endpoint or coincide")
        mu = (-t / 2).acosh()
        if mu.imag < 0:
            mu = mu + 2 * acb.pi() * I
        return mu


INFINITY = math.inf


def fixed_points(m: Mat2, precision: int = DEFAULT_PRECISION) -> tuple:
    """Roots of m21 z^2 - 2 m11 z - m12 = 0; math.inf stands for the point at infinity."""
    with working_precision(precision):
        if m.m21.is_zero():
            return (-m.m12 / (2 * m.m11), INFINITY)
        if m.m21.contains(0):
            raise PrecisionExhausted("cannot decide whether m21 vanishes")
        # det = 1 gives m11^2 + m12 m21 = -1, so the discriminant root is i
        return ((m.m11 + I) / m.m21, (m.m11 - I) / m.m21)


@dataclass(frozen=True)
class GeneralizedCircle:
    """Invariant circle of a half-turn on the boundary sphere."""

    center: acb
    radius: arb
    kind: str = "circle"

    def as_dict(self) -> dict:
        return {"kind": self.kind, "center": ball_dict(self.center), "radius": float(self.radius.mid())}


def diameter_circle(m: Mat2, precision: int = DEFAULT_PRECISION) -> GeneralizedCircle:
    """Circle whose diameter joins the fixed points (m11 +- i)/m21."""
    if m.m21.is_zero():
        raise DegenerateCircle("the half-turn fixes infinity; conjugate before taking circles")
    if m.m21.contains(0):
        raise PrecisionExhausted("cannot decide whether m21 vanishes")
    with working_precision(precision):
        return GeneralizedCircle(m.m11 / m.m21, 1 / abs(m.m21))


def params_from_two_generator(t0: Value, t1: Value, t01: Value) -> Params:
    """Parameters from tr(g0), tr(g1), tr(g0 g1^-1) with g0 = ab, g1 = ac.

    tr(g0 g1^-1) = tr(AB C^-1 A^-1) = tr(B C^-1) = -tr(BC). Re-lifting one
    generator to -g negates two of the three parameters; the triple is only
    defined up to such sign changes.
    """
    return Params(t0, t1, _negate(t01))


def _negate(v: Value) -> Value:
    if isinstance(v, tuple):
        return (-v[0], -v[1])
    return -v
