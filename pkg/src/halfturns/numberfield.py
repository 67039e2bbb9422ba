"""Exact arithmetic in number fields Q(theta) embedded in C.

Elements are coordinate vectors in the power basis 1, theta, ..., theta^(n-1).
The embedding is fixed by an isolated complex root of the defining polynomial.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import count
from typing import Iterable, Sequence

import flint
from flint import acb, fmpz_poly

from . import balls
from .balls import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP, working_precision
from .errors import NonSquarefree, PrecisionExhausted
from .polynomials import (
    Poly,
    RealRoot,
    count_real_roots,
    format_poly,
    is_squarefree,
    isolate_real_roots,
    xgcd,
)

# --- linear algebra over Q ------------------------------------------------


class _Span:
    """Incremental row-echelon basis of a Q-subspace of Q^n."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, list[Fraction]]] = []  # (pivot, row) with row[pivot] == 1

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        v = list(v)
        for pivot, row in self.rows:
            c = v[pivot]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v: Sequence[Fraction]) -> bool:
        """Insert v; False if it was already in the span."""
        v = self.reduce(v)
        pivot = next((i for i, c in enumerate(v) if c), None)
        if pivot is None:
            return False
        c = v[pivot]
        v = [a / c for a in v]
        new_rows = []
        for p, row in self.rows:
            k = row[pivot]
            new_rows.append((p, [a - k * b for a, b in zip(row, v)] if k else row))
        new_rows.append((pivot, v))
        self.rows = new_rows
        return True

    def __len__(self) -> int:
        return len(self.rows)


def solve_rational(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Coefficients c with sum c_j * columns[j] == target, or None if inconsistent."""
    m = len(columns)
    n = len(target)
    # augmented matrix, one row per coordinate
    rows = [[Fraction(columns[j][i]) for j in range(m)] + [Fraction(target[i])] for i in range(n)]
    pivots = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, n) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [a * inv for a in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                k = rows[i][c]
                rows[i] = [a - k * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    if any(rows[i][m] for i in range(r, n)):
        return None
    sol = [Fraction(0)] * m
    for i, c in enumerate(pivots):
        sol[c] = rows[i][m]
    return sol


# --- fields ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _complex_roots(coeffs: tuple[int, ...], prec: int) -> tuple[acb, ...]:
    with working_precision(prec):
        return tuple(r for r, _ in fmpz_poly(list(coeffs)).complex_roots())


@lru_cache(maxsize=None)
def _reference_root(coeffs: tuple[int, ...]) -> acb:
    """Largest imaginary part, ties broken by largest real part."""
    roots = _complex_roots(coeffs, DEFAULT_PRECISION)
    best = max(roots, key=lambda z: float(z.imag.mid()))
    ties = [z for z in roots if z.imag.overlaps(best.imag)]
    return max(ties, key=lambda z: float(z.real.mid()))


@lru_cache(maxsize=None)
def _root_at(coeffs: tuple[int, ...], prec: int) -> acb:
    ref = _reference_root(coeffs)
    if prec == DEFAULT_PRECISION:
        return ref
    matches = [z for z in _complex_roots(coeffs, prec) if z.overlaps(ref)]
    if len(matches) != 1:
        raise PrecisionExhausted(f"could not track the chosen root at {prec} bits")
    return matches[0]


@dataclass(frozen=True)
class NumberField:
    """Q[t]/(f) with t sent to a chosen complex root of f.

    The chosen root is the one with the largest imaginary part, ties broken by
    the largest real part; Q(t^2 + 3) therefore embeds t as +i*sqrt(3).
    """

    polynomial: Poly

    def __post_init__(self):
        p = self.polynomial
        if p.degree < 1 or not p.is_monic() or not p.is_integral():
            raise ValueError(f"defining polynomial must be monic integral of degree >= 1, got {p}")
        if p.degree > 1:
            _, factors = p.to_fmpz_poly().factor()
            if len(factors) != 1 or factors[0][1] != 1:
                raise ValueError(f"defining polynomial {p} is reducible over Q")

    @classmethod
    def parse(cls, text: str) -> NumberField:
        return cls(parse_polynomial(text))

    @classmethod
    def rationals(cls) -> NumberField:
        return cls(Poly([0, 1]))

    @property
    def degree(self) -> int:
        return self.polynomial.degree

    def root(self, prec: int = DEFAULT_PRECISION) -> acb:
        return _root_at(tuple(self.polynomial.int_coeffs()), prec)

    @property
    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self(-self.polynomial.coeffs[0])
        return FieldElement(self, tuple(Fraction(int(i == 1)) for i in range(self.degree)))

    def __call__(self, value) -> FieldElement:
        """Coerce a rational, a Poly in t, or a FieldElement of this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, Poly):
            r = value % self.polynomial
            coords = list(r.coeffs) + [Fraction(0)] * (self.degree - len(r.coeffs))
            return FieldElement(self, tuple(coords))
        q = Fraction(value)
        return FieldElement(self, (q,) + (Fraction(0),) * (self.degree - 1))

    def element(self, text: str) -> FieldElement:
        return parse_element(text, self)

    def __str__(self) -> str:
        return f"Q[t]/({self.polynomial})"


@dataclass(frozen=True)
class FieldElement:
    field: NumberField
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise ValueError("coordinate vector length must equal the field degree")

    @property
    def poly(self) -> Poly:
        return Poly(self.coords)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self.field(other)

    def __add__(self, other) -> FieldElement:
        other = self._coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> FieldElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> FieldElement:
        return self._coerce(other) - self

    def __mul__(self, other) -> FieldElement:
        other = self._coerce(other)
        return self.field(self.poly * other.poly)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = xgcd(self.poly, self.field.polynomial)
        assert g.degree == 0
        return self.field(s)

    def __truediv__(self, other) -> FieldElement:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> FieldElement:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> FieldElement:
        if n < 0:
            return self.inverse() ** (-n)
        out, base = self.field(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coords == other.coords
        try:
            return self.coords == self.field(other).coords
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def numeric(self, prec: int = DEFAULT_PRECISION) -> acb:
        root = self.field.root(prec)
        with working_precision(prec):
            return self.poly.eval_ball(root)

    def __str__(self) -> str:
        return format_poly(self.poly)

    def __repr__(self) -> str:
        return f"FieldElement({self} in {self.field})"


# --- element-level operations ----------------------------------------------


def minimal_polynomial(x: FieldElement) -> Poly:
    """Monic minimal polynomial of x over Q.

    Found as the first Q-linear dependence among 1, x, x^2, ...
    """
    n = x.field.degree
    powers = [x.field(1).coords]
    p = x.field(1)
    for k in range(1, n + 1):
        p = p * x
        sol = solve_rational(powers, p.coords)
        if sol is not None:
            return Poly([-c for c in sol] + [1])
        powers.append(p.coords)
    raise AssertionError("no linear dependence up to the field degree")


def is_algebraic_integer(x: FieldElement) -> bool:
    return minimal_polynomial(x).is_integral()


def exact_abs_squared(x: FieldElement) -> Fraction | None:
    """|x|^2 under the field embedding when it is rational and cheap to see."""
    m = minimal_polynomial(x)
    if m.degree == 1:
        return m.coeffs[0] ** 2
    if m.degree == 2:
        c, b, _ = m.coeffs
        if b * b - 4 * c < 0:
            return c
    return None


@dataclass(frozen=True)
class Signature:
    real_places: int
    complex_places: int

    @property
    def degree(self) -> int:
        return self.real_places + 2 * self.complex_places


def signature(poly: Poly) -> Signature:
    """(r1, r2) of Q[t]/(poly), counting real roots with a Sturm chain."""
    if not is_squarefree(poly):
        raise NonSquarefree(f"{poly} is not squarefree")
    r1 = count_real_roots(poly)
    return Signature(r1, (poly.degree - r1) // 2)


def _squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1
    return sign * out * n


def quadratic_label(d: int) -> str:
    """Label of Q(sqrt(d)) in the form used by the candidate tables, e.g. Q(√-3)."""
    return f"Q(√{_squarefree_part(d)})"


@dataclass(frozen=True)
class Subfield:
    """A subfield of ``ambient`` with a Q-basis and a primitive element."""

    ambient: NumberField
    basis: tuple[FieldElement, ...]
    primitive: FieldElement
    polynomial: Poly
    _powers: tuple[tuple[Fraction, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def degree(self) -> int:
        return len(self.basis)

    def express(self, x: FieldElement) -> Poly:
        """g with x = g(primitive); ValueError if x is not in the subfield."""
        sol = solve_rational(self._powers, x.coords)
        if sol is None:
            raise ValueError(f"{x} is not in the subfield generated by {self.primitive}")
        return Poly(sol)

    def __contains__(self, x: FieldElement) -> bool:
        return solve_rational(self._powers, x.coords) is not None

    def signature(self) -> Signature:
        return signature(self.polynomial)

    def real_places(self) -> list[RealEmbedding]:
        return [RealEmbedding(self, r.refine_to(Fraction(1, 2**40))) for r in isolate_real_roots(self.polynomial)]

    @property
    def label(self) -> str:
        if self.degree == 1:
            return "Q"
        if self.degree == 2:
            c, b, _ = self.polynomial.coeffs
            disc = b * b - 4 * c
            return quadratic_label(disc.numerator * disc.denominator)
        return f"Q[t]/({self.polynomial})"

    def describe(self) -> dict:
        return {
            "degree": self.degree,
            "label": self.label,
            "primitive_element": str(self.primitive),
            "defining_polynomial": str(self.polynomial),
            "basis": [str(b) for b in self.basis],
        }


def subfield_generated(ambient: NumberField, gens: Iterable[FieldElement]) -> Subfield:
    """Smallest subfield of ``ambient`` containing ``gens``."""
    span = _Span(ambient.degree)
    basis: list[FieldElement] = []

    def push(x: FieldElement) -> bool:
        if span.add(x.coords):
            basis.append(x)
            return True
        return False

    push(ambient(1))
    for g in gens:
        push(ambient(g))
    changed = True
    while changed:
        changed = False
        for i in range(len(basis)):
            for j in range(i, len(basis)):
                if push(basis[i] * basis[j]):
                    changed = True
    degree = len(basis)
    if degree == 1:
        primitive = ambient(1)
    else:
        rest = basis[1:]
        for m in count(1):
            primitive = sum((b * m**k for k, b in enumerate(rest)), ambient(0))
            if minimal_polynomial(primitive).degree == degree:
                break
    poly = minimal_polynomial(primitive)
    powers = []
    p = ambient(1)
    for _ in range(degree):
        powers.append(p.coords)
        p = p * primitive
    return Subfield(ambient, tuple(basis), primitive, poly, tuple(powers))


@dataclass(frozen=True)
class RealEmbedding:
    subfield: Subfield
    root: RealRoot

    def describe(self) -> dict:
        return {"lo": str(self.root.lo), "hi": str(self.root.hi), "approx": self.root.approx()}


def real_embedding_sign(
    x: FieldElement,
    embedding: RealEmbedding,
    precision: int = DEFAULT_PRECISION,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    """Exact sign of the image of x under a real embedding of its subfield.

    Zero is detected exactly: x = g(theta) with deg g < deg f and f
    irreducible, so g(root) = 0 only when g is the zero polynomial.
    Otherwise the root interval is bisected and the precision doubled until
    interval evaluation of g certifies a sign.
    """
    g = embedding.subfield.express(x)
    if g.is_zero():
        return 0
    root = embedding.root
    for prec in balls.precision_ladder(precision, precision_cap):
        root = root.refine_to(Fraction(1, 2 ** (prec // 2)))
        with working_precision(prec):
            s = balls.sign(g.eval_ball(root.ball()))
        if s:
            return s
    raise PrecisionExhausted(f"sign of {x} not certified at {precision_cap} bits")


# --- text grammar ---------------------------------------------------------

_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__", ast.Div: "__truediv__"}


def _evaluate(text: str, symbols: dict, number):
    """Evaluate +, -, *, /, ^ (integer exponents), parentheses and named symbols."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return number(Fraction(repr(node.value)) if isinstance(node.value, float) else node.value)
        if isinstance(node, ast.Constant) and isinstance(node.value, complex) and "i" in symbols:
            v = node.value
            return number(Fraction(repr(v.real))) + number(Fraction(repr(v.imag))) * symbols["i"]
        if isinstance(node, ast.Name) and node.id in symbols:
            return symbols[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            left, right = ev(node.left), ev(node.right)
            return getattr(left, _BINOPS[type(node.op)])(right)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise ValueError(f"exponent must be an integer literal in {text!r}")
            return ev(node.left) ** (sign * exp.value)
        raise ValueError(f"unsupported syntax in {text!r}")

    return ev(tree)


def parse_polynomial(text: str, var: str = "t") -> Poly:
    return _evaluate(text, {var: Poly.x()}, Poly.constant)


def parse_element(text: str, field: NumberField) -> FieldElement:
    """Parse a polynomial in t with rational coefficients, e.g. ``(-1+t)/2``."""
    return _evaluate(text, {"t": field.gen}, field)


_GAUSSIAN = None


def gaussian_field() -> NumberField:
    global _GAUSSIAN
    if _GAUSSIAN is None:
        _GAUSSIAN = NumberField(Poly([1, 0, 1]))
    return _GAUSSIAN


def parse_complex(text: str) -> tuple[Fraction, Fraction]:
    """Exact value of a decimal complex literal such as ``-0.5+0.866i``."""
    import re

    src = re.sub(r"(?<=[0-9.])i\b", "j", text.strip())
    k = gaussian_field()
    z = _evaluate(src, {"i": k.gen}, k)
    return z.coords[0], z.coords[1]
