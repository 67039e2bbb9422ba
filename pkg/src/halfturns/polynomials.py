"""Univariate polynomials over Q, Sturm sequences and real root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from flint import acb, arb, fmpz_poly

from .errors import NonSquarefree


def _strip(coeffs: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class Poly:
    """Polynomial with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        object.__setattr__(self, "coeffs", _strip(coeffs))

    @classmethod
    def constant(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_monic(self) -> bool:
        return self.lc == 1

    def int_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise ValueError(f"{self} has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def monic(self) -> Poly:
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def primitive(self) -> tuple[Fraction, Poly]:
        """(content, integer primitive part) with positive leading coefficient."""
        if self.is_zero():
            return Fraction(0), self
        from math import gcd, lcm

        den = 1
        for c in self.coeffs:
            den = lcm(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return Fraction(g, den), Poly([c // g for c in ints])

    def scale(self, c) -> Poly:
        c = Fraction(c)
        return Poly([c * a for a in self.coeffs])

    def __add__(self, other) -> Poly:
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> Poly:
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> Poly:
        return _as_poly(other) - self

    def __mul__(self, other) -> Poly:
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly([1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        quo = [Fraction(0)] * max(len(rem) - other.degree, 0)
        lc = other.lc
        for k in range(len(rem) - 1, other.degree - 1, -1):
            c = rem[k] / lc
            if c:
                quo[k - other.degree] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - other.degree + j] -= c * b
        return Poly(quo), Poly(rem[: other.degree] if other.degree > 0 else [])

    def __truediv__(self, c) -> Poly:
        if isinstance(c, Poly):
            if c.degree != 0:
                raise ValueError("only division by a constant polynomial is exact")
            c = c.coeffs[0]
        return self.scale(1 / Fraction(c))

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __call__(self, x):
        """Horner evaluation; works for Fraction, int, arb, acb and field elements."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_ball(self, x):
        from .balls import to_fmpq

        acc = acb(0) if isinstance(x, acb) else arb(0)
        for c in reversed(self.coeffs):
            acc = acc * x + to_fmpq(c)
        return acc

    def derivative(self) -> Poly:
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose_reciprocal(self, s) -> Poly:
        """t^deg * p(s / t)."""
        n = self.degree
        s = Fraction(s)
        return Poly([c * s**i for i, c in enumerate(self.coeffs)][::-1] if n >= 0 else [])

    def to_fmpz_poly(self) -> fmpz_poly:
        return fmpz_poly(self.int_coeffs())

    def __str__(self) -> str:
        return format_poly(self)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly([x])


def format_poly(p: Poly, var: str = "t") -> str:
    if p.is_zero():
        return "0"
    terms = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if a == 1:
                body = mono
            elif a.denominator == 1:
                body = f"{a}*{mono}"
            else:
                body = f"({a})*{mono}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """(g, s, u) with s*a + u*b = g monic."""
    r0, r1 = a, b
    s0, s1 = Poly([1]), Poly()
    u0, u1 = Poly(), Poly([1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    lc = r0.lc
    return r0.scale(1 / lc), s0.scale(1 / lc), u0.scale(1 / lc)


def is_squarefree(p: Poly) -> bool:
    return gcd(p, p.derivative()).degree <= 0


# --- Sturm sequences ------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    seq.pop()
    return seq


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def variations_at(seq: Sequence[Poly], x) -> int:
    return _variations([_sign(q(Fraction(x))) for q in seq])


def variations_at_infinity(seq: Sequence[Poly], positive: bool) -> int:
    signs = []
    for q in seq:
        s = _sign(q.lc)
        if not positive and q.degree % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(p: Poly) -> int:
    """Distinct real roots of p (exact)."""
    if p.degree <= 0:
        return 0
    seq = sturm_sequence(p)
    return variations_at_infinity(seq, False) - variations_at_infinity(seq, True)


def count_roots_in(p: Poly, lo, hi, seq: Sequence[Poly] | None = None) -> int:
    """Distinct real roots in the half-open interval (lo, hi]."""
    seq = seq if seq is not None else sturm_sequence(p)
    return variations_at(seq, lo) - variations_at(seq, hi)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every complex root has modulus < the returned value."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RealRoot:
    """A real root of a squarefree polynomial isolated in [lo, hi].

    Either lo == hi (an exact rational root) or p(lo) and p(hi) have opposite
    nonzero signs and the open interval holds exactly one root.
    """

    poly: Poly
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def refine(self, steps: int = 1) -> RealRoot:
        lo, hi = self.lo, self.hi
        if lo == hi:
            return self
        s_lo = _sign(self.poly(lo))
        for _ in range(steps):
            mid = (lo + hi) / 2
            s = _sign(self.poly(mid))
            if s == 0:
                return RealRoot(self.poly, mid, mid)
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        return RealRoot(self.poly, lo, hi)

    def refine_to(self, width) -> RealRoot:
        r = self
        while r.width > width:
            r = r.refine(4)
        return r

    def ball(self) -> arb:
        from .balls import hull

        return hull(self.lo, self.hi)

    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)


def isolate_real_roots(p: Poly) -> list[RealRoot]:
    """Isolate every real root of a squarefree polynomial, in increasing order."""
    if p.degree <= 0:
        return []
    if not is_squarefree(p):
        raise NonSquarefree(f"{p} is not squarefree")
    seq = sturm_sequence(p)
    b = root_bound(p)
    out: list[RealRoot] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots_in(p, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            if p(hi) == 0:
                out.append(RealRoot(p, hi, hi))
            else:
                out.append(RealRoot(p, lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out, key=lambda r: r.lo)


def real_roots_in_closed(p: Poly, lo, hi) -> int:
    """Distinct real roots in [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    n = count_roots_in(p, lo, hi)
    return n + (1 if p(lo) == 0 else 0)
