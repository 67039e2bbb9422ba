"""Free-product detection through invariant circles (Klein combination).

Each half-turn swaps the two sides of any circle through its fixed points.
If one closed side can be chosen for each of the three circles so that the
chosen disks are pairwise disjoint, ping-pong makes the group the free
product of three groups of order two.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from flint import acb, arb

from . import balls
from .balls import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP, real_ball, working_precision
from .errors import DegenerateCircle, DegenerateParams, PrecisionExhausted
from .numberfield import FieldElement, exact_abs_squared
from .rep import (
    GeneralizedCircle,
    HalfTurnTriple,
    Params,
    Value,
    build_regular,
    build_representation,
    diameter_circle,
    value_ball,
)

RHO_STAR_ROUNDED = Fraction(32, 5)


# --- annulus bounds for regular groups --------------------------------------


@dataclass(frozen=True)
class AnnulusBounds:
    """phi(x) bounds the radius of the third circle; [R1, R2] bounds |z| on it."""

    x: arb
    phi: arb
    r1: arb
    r2: arb


def annulus_bounds(x, precision: int = DEFAULT_PRECISION) -> AnnulusBounds:
    with working_precision(precision):
        x = real_ball(x)
        if not x > 1:
            raise ValueError("annulus bounds need x > 1")
        phi = (1 + 1 / (x * x)) / (x * (1 - 1 / x**4))
        r1 = abs(1 - phi * phi).sqrt() - phi
        r2 = abs(1 + phi * phi).sqrt() + phi
    return AnnulusBounds(x, phi, r1, r2)


def _inner_gap(x, precision: int) -> arb:
    b = annulus_bounds(x, precision)
    with working_precision(precision):
        return b.r1 - 1 / b.x


def _outer_gap(x, precision: int) -> arb:
    b = annulus_bounds(x, precision)
    with working_precision(precision):
        return b.x - b.r2


def _threshold(gap, lo: Fraction, hi: Fraction, tolerance: Fraction, precision: int, cap: int):
    """Smallest x in [lo, hi] from which the increasing function ``gap`` is positive.

    Returns (lo_end, hi_end, has_root): a bracket around the sign change, or
    (lo, lo, False) when gap is already positive at lo.
    """

    def certified_sign(x):
        for prec in balls.precision_ladder(precision, cap):
            s = balls.sign(gap(x, prec))
            if s is not None:
                return s
        raise PrecisionExhausted(f"sign of the annulus gap at {x} not certified")

    if certified_sign(lo) > 0:
        return lo, lo, False
    if certified_sign(hi) < 0:
        raise ValueError(f"gap still negative at {hi}")
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        s = certified_sign(mid)
        if s == 0:
            return mid, mid, True
        if s > 0:
            hi = mid
        else:
            lo = mid
    return lo, hi, True


@dataclass(frozen=True)
class SplitConstants:
    beta_star: arb
    rho_star_computed: arb
    rho_star_rounded: Fraction
    binding_equation: str
    inner_bracket: tuple[Fraction, Fraction]
    outer_bracket: tuple[Fraction, Fraction] | None  # None: x > R2(x) already at the left end

    def as_dict(self) -> dict:
        return {
            "beta_star": [float(b) for b in balls.interval(self.beta_star)],
            "rho_star_computed": [float(b) for b in balls.interval(self.rho_star_computed)],
            "rho_star_rounded": str(self.rho_star_rounded),
            "binding_equation": self.binding_equation,
            "outer_equation_root_in_search_interval": self.outer_bracket is not None,
        }


def compute_split_constants(
    tolerance=Fraction(1, 10**12),
    search_interval=(Fraction(2), Fraction(4)),
    precision: int = DEFAULT_PRECISION,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> SplitConstants:
    """Solve R1(x) = 1/x and R2(x) = x by certified bisection.

    beta* is the larger of the two thresholds. On [2, 4] the equation
    R2(x) = x has no root (x > R2(x) throughout), so R1(x) = 1/x binds.
    """
    tolerance = Fraction(tolerance)
    lo, hi = (Fraction(v) for v in search_interval)
    a1, b1, _ = _threshold(_inner_gap, lo, hi, tolerance, precision, precision_cap)
    a2, b2, outer_root = _threshold(_outer_gap, lo, hi, tolerance, precision, precision_cap)
    if b1 >= b2:
        bracket, equation = (a1, b1), "R1(x) = 1/x"
    else:
        bracket, equation = (a2, b2), "R2(x) = x"
    with working_precision(precision):
        beta = balls.hull(*bracket)
        rho = 1 / (beta * beta) + beta * beta
    return SplitConstants(
        beta_star=beta,
        rho_star_computed=rho,
        rho_star_rounded=RHO_STAR_ROUNDED,
        binding_equation=equation,
        inner_bracket=(a1, b1),
        outer_bracket=(a2, b2) if outer_root else None,
    )


def certify_monotonicity(lo=Fraction(2), hi=Fraction(4), pieces: int = 256, precision: int = DEFAULT_PRECISION) -> bool:
    """Certify R1' > 0 and R2' < 0 on [lo, hi] by interval evaluation of the derivatives.

    With phi = x/(x^2 - 1) and phi' = -(x^2 + 1)/(x^2 - 1)^2:
    R1' = -phi' (1 + phi/sqrt(1 - phi^2)),  R2' = phi' (1 + phi/sqrt(1 + phi^2)).
    """
    lo, hi = Fraction(lo), Fraction(hi)
    step = (hi - lo) / pieces
    with working_precision(precision):
        for k in range(pieces):
            x = balls.hull(lo + k * step, lo + (k + 1) * step)
            x2 = x * x
            phi = x / (x2 - 1)
            dphi = -(x2 + 1) / ((x2 - 1) * (x2 - 1))
            if not phi < 1:
                return False
            d1 = -dphi * (1 + phi / (1 - phi * phi).sqrt())
            d2 = dphi * (1 + phi / (1 + phi * phi).sqrt())
            if not (d1 > 0 and d2 < 0):
                return False
    return True


_CONSTANTS_CACHE: dict = {}


def rho_star_value(choice="rounded"):
    """``rounded`` -> 32/5 exactly; ``computed`` -> certified ball; numbers pass through."""
    if choice == "rounded":
        return RHO_STAR_ROUNDED
    if choice == "computed":
        if "computed" not in _CONSTANTS_CACHE:
            _CONSTANTS_CACHE["computed"] = compute_split_constants().rho_star_computed
        return _CONSTANTS_CACHE["computed"]
    if isinstance(choice, arb):
        return choice
    if isinstance(choice, str):
        return Fraction(choice)
    return balls.as_rational(choice)


def abs_squared(rho: Value) -> Fraction | arb:
    """|rho|^2, exactly whenever the value allows it."""
    if isinstance(rho, FieldElement):
        exact = exact_abs_squared(rho)
        if exact is not None:
            return exact
    elif isinstance(rho, (int, Fraction)):
        return Fraction(rho) ** 2
    elif isinstance(rho, tuple):
        return Fraction(rho[0]) ** 2 + Fraction(rho[1]) ** 2
    elif isinstance(rho, complex):
        return Fraction(rho.real) ** 2 + Fraction(rho.imag) ** 2  # the exact binary value
    z = value_ball(rho, DEFAULT_PRECISION)
    with working_precision(DEFAULT_PRECISION):
        return z.real * z.real + z.imag * z.imag


def at_least(rho: Value, threshold) -> bool:
    """Certified |rho| >= threshold (inclusive)."""
    a = abs_squared(rho)
    t = rho_star_value(threshold)
    if isinstance(a, Fraction) and isinstance(t, Fraction):
        return a >= t * t
    with working_precision(DEFAULT_PRECISION):
        diff = real_ball(a) - real_ball(t) * real_ball(t)
    s = balls.sign(diff)
    if s is None:
        raise PrecisionExhausted("cannot compare |rho| with the threshold")
    return s >= 0


def splits_by_annulus(rho: Value, rho_star="rounded") -> bool:
    """Sufficient splitting test for regular groups: |rho| >= rho*.

    |rho| = |1/beta^2 + beta^2| <= 1/|beta|^2 + |beta|^2, and x -> 1/x^2 + x^2
    increases for x >= 1, so |rho| >= 1/beta*^2 + beta*^2 forces |beta| >= beta*.
    """
    return at_least(rho, rho_star)


# --- exact circle test ------------------------------------------------------

DISJOINT = "certified_disjoint_disks"
INTERSECTING = "certified_intersecting"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class DisjointnessResult:
    status: str
    witness: tuple[str, str, str] | None = None  # chosen side of C0, C1, C2
    crossing_pair: tuple[int, int] | None = None
    precision: int = DEFAULT_PRECISION
    reason: str = ""
    circles: tuple[GeneralizedCircle, ...] = field(default=(), repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": list(self.witness) if self.witness else None,
            "crossing_pair": list(self.crossing_pair) if self.crossing_pair else None,
            "precision_bits": self.precision,
            "reason": self.reason,
            "circles": [c.as_dict() for c in self.circles],
        }


def _pair_relations(ci: GeneralizedCircle, cj: GeneralizedCircle):
    d = abs(ci.center - cj.center)
    ri, rj = ci.radius, cj.radius
    return {
        "apart": balls.sign(d - ri - rj),  # > 0: closed inner disks disjoint
        "i_in_j": balls.sign(rj - d - ri),  # > 0: closed disk i inside open disk j
        "j_in_i": balls.sign(ri - d - rj),
        "cross": (d - abs(ri - rj) > 0) and (ri + rj - d > 0),
    }


def _circle_test(circles: Sequence[GeneralizedCircle], precision: int) -> DisjointnessResult:
    with working_precision(precision):
        rel = {(i, j): _pair_relations(circles[i], circles[j]) for i, j in itertools.combinations(range(3), 2)}
    unknown = False
    for sides in itertools.product(("inside", "outside"), repeat=3):
        if sides.count("outside") > 1:
            continue  # two outer regions both contain infinity
        ok = True
        for (i, j), r in rel.items():
            if sides[i] == "inside" and sides[j] == "inside":
                s = r["apart"]
            elif sides[i] == "inside":
                s = r["i_in_j"]
            else:
                s = r["j_in_i"]
            if s is None:
                unknown = True
            if s != 1:
                ok = False
                break
        if ok:
            return DisjointnessResult(DISJOINT, witness=sides, precision=precision, circles=tuple(circles))
    for pair, r in rel.items():
        if r["cross"]:
            return DisjointnessResult(INTERSECTING, crossing_pair=pair, precision=precision, circles=tuple(circles))
    reason = "comparisons not certified at this precision" if unknown else "no admissible disk choice, no crossing pair"
    return DisjointnessResult(UNDECIDED, precision=precision, reason=reason, circles=tuple(circles))


def circle_disjointness(t: HalfTurnTriple, precision_cap: int = DEFAULT_PRECISION_CAP) -> DisjointnessResult:
    """Search the eight inside/outside choices for pairwise disjoint closed disks.

    Undecided outcomes caused by wide balls are retried with the triple
    rebuilt at doubled precision, up to ``precision_cap``.
    """
    while True:
        circles = [diameter_circle(m, t.precision) for m in t.matrices]
        result = _circle_test(circles, t.precision)
        if result.status != UNDECIDED or not result.reason.startswith("comparisons"):
            return result
        if t.precision >= precision_cap or not t.params.refinable():
            return result
        t = t.rebuild(min(2 * t.precision, precision_cap))


# --- conjecture scan --------------------------------------------------------


@dataclass(frozen=True)
class ScanSample:
    params: tuple[tuple[Fraction, Fraction], ...]
    status: str
    witness: tuple[str, ...] | None = None
    note: str = ""

    def row(self) -> dict:
        out = {}
        for k, (re, im) in enumerate(self.params):
            out[f"rho{k}"] = f"{float(re)!r}{'+' if im >= 0 else '-'}{float(abs(im))!r}i"
        out["status"] = self.status
        out["witness"] = "/".join(self.witness) if self.witness else ""
        out["note"] = self.note
        return out


Box = tuple[Fraction, Fraction, Fraction, Fraction]  # re_lo, re_hi, im_lo, im_hi


def _axis(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    if lo == hi or count == 1:
        return [lo]
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _grid(region: Sequence[Box], count: int) -> Iterable[tuple]:
    axes = []
    for re_lo, re_hi, im_lo, im_hi in region:
        axes.append(_axis(balls.as_rational(re_lo), balls.as_rational(re_hi), count))
        axes.append(_axis(balls.as_rational(im_lo), balls.as_rational(im_hi), count))
    for coords in itertools.product(*axes):
        yield tuple((coords[2 * k], coords[2 * k + 1]) for k in range(3))


def _random(region: Sequence[Box], count: int, seed: int) -> Iterable[tuple]:
    rng = random.Random(seed)

    def draw(lo, hi):
        lo, hi = balls.as_rational(lo), balls.as_rational(hi)
        return lo + (hi - lo) * Fraction(rng.randrange(2**32), 2**32)

    for _ in range(count):
        yield tuple((draw(b[0], b[1]), draw(b[2], b[3])) for b in region)


def evaluate_sample(point, precision: int = DEFAULT_PRECISION, precision_cap: int = 1024) -> ScanSample:
    params = Params(*point)
    try:
        result = circle_disjointness(build_representation(params, precision), precision_cap)
    except (DegenerateParams, DegenerateCircle, PrecisionExhausted) as exc:
        return ScanSample(point, UNDECIDED, note=type(exc).__name__)
    return ScanSample(point, result.status, result.witness, result.reason)


def conjecture_scan(
    region: Sequence[Box],
    sampler: str = "grid",
    count: int = 5,
    threshold="rounded",
    seed: int = 0,
    precision: int = DEFAULT_PRECISION,
    keep_all: bool = False,
) -> list[ScanSample]:
    """Look for parameters with every |rho_i| >= threshold whose circles do not split.

    ``region`` holds one (re_lo, re_hi, im_lo, im_hi) box per parameter. The
    grid sampler uses ``count`` points along each non-degenerate axis; the
    random sampler draws ``count`` points. Returned samples are potential
    counterexamples (intersecting or undecided), or everything with keep_all.
    """
    if count <= 0:
        return []
    if sampler == "grid":
        points = _grid(region, count)
    elif sampler == "random":
        points = _random(region, count, seed)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    out = []
    for point in points:
        if not all(at_least(p, threshold) for p in point):
            continue
        sample = evaluate_sample(point, precision)
        if keep_all or sample.status != DISJOINT:
            out.append(sample)
    return out
