"""Arithmeticity test for three-half-turn groups.

A group with parameters (rho0, rho1, rho2) is nearly arithmetic exactly when

1. every rho_i is an algebraic integer,
2. k = Q(rho0^2, rho1^2, rho0 rho1 rho2) has exactly one complex place,
3. the quaternion algebra (a, b / k) with
   a = rho0^2 (rho0^2 - 4),
   b = rho0^2 rho1^2 (rho0^2 + rho1^2 + rho2^2 - rho0 rho1 rho2 - 4)
   is ramified at every real place (both entries negative there),
4. the group is not a free product of cyclic groups.

Condition 4 is only semidecided: the circle test can certify splitting, and
a failed test is reported as such, not as a proof of non-splitting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .balls import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP
from .errors import DegenerateCircle, DegenerateSymbol, PrecisionExhausted
from .klein import DISJOINT, INTERSECTING, circle_disjointness, splits_by_annulus
from .numberfield import (
    FieldElement,
    NumberField,
    Signature,
    Subfield,
    gaussian_field,
    is_algebraic_integer,
    minimal_polynomial,
    real_embedding_sign,
    subfield_generated,
)
from .rep import Params, build_representation

FINITE_COVOLUME_NOTE = (
    "nearly arithmetic does not imply arithmetic: arithmeticity also needs finite covolume, "
    "which this test does not check"
)

SPLITS = "splits"
NOT_SPLIT = "not_split_certified"
UNKNOWN = "unknown"


def exact_params(p: Params) -> tuple[FieldElement, FieldElement, FieldElement]:
    """The parameters as elements of one number field.

    Gaussian-rational pairs (re, im) are placed in Q(i).
    """
    vals = p.values
    if all(isinstance(v, FieldElement) for v in vals) or all(isinstance(v, (int, Fraction)) for v in vals):
        return p.exact_values()
    if all(isinstance(v, (int, Fraction, tuple)) for v in vals):
        k = gaussian_field()
        out = []
        for v in vals:
            re, im = (v, 0) if not isinstance(v, tuple) else v
            out.append(k(re) + k(im) * k.gen)
        return tuple(out)
    raise ValueError("the arithmeticity test needs exact parameters in a number field")


def trace_field(p: Params) -> Subfield:
    r0, r1, r2 = exact_params(p)
    return subfield_generated(r0.field, [r0, r1, r2])


def invariant_trace_field(p: Params) -> Subfield:
    r0, r1, r2 = exact_params(p)
    return subfield_generated(r0.field, [r0 * r0, r1 * r1, r0 * r1 * r2])


@dataclass(frozen=True)
class HilbertSymbolData:
    a: FieldElement
    b: FieldElement
    field: Subfield

    def describe(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "a_in_k": str(self.field.express(self.a)),
            "b_in_k": str(self.field.express(self.b)),
            "a_minimal_polynomial": str(minimal_polynomial(self.a)),
            "b_minimal_polynomial": str(minimal_polynomial(self.b)),
        }


HILBERT_CONVENTIONS = ("display", "matrix")


def hilbert_entries(p: Params, k: Subfield | None = None, convention: str = "display") -> HilbertSymbolData:
    """a = rho0^2 (rho0^2 - 4), b = rho0^2 rho1^2 (rho0^2 + rho1^2 + rho2^2 -+ rho0 rho1 rho2 - 4).

    ``display`` uses the minus sign. ``matrix`` uses the plus sign, which is
    what tr[g0^2, g1^2] - 2 gives for g0 = AB, g1 = AC when tr(AB), tr(AC),
    tr(BC) = rho0, rho1, rho2: tr(g0 g1^-1) = -rho2. The two agree after
    rho -> -rho for all three parameters.
    """
    if convention not in HILBERT_CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    r0, r1, r2 = exact_params(p)
    k = k if k is not None else invariant_trace_field(p)
    s0, s1 = r0 * r0, r1 * r1
    a = s0 * (s0 - 4)
    prod = r0 * r1 * r2 if convention == "matrix" else -(r0 * r1 * r2)
    b = s0 * s1 * (s0 + s1 + r2 * r2 + prod - 4)
    if a.is_zero():
        raise DegenerateSymbol("first Hilbert entry vanishes (rho0 is 0 or +-2); try permuting the parameters")
    if b.is_zero():
        raise DegenerateSymbol("second Hilbert entry vanishes")
    return HilbertSymbolData(a, b, k)


@dataclass(frozen=True)
class ArithmeticityReport:
    params: tuple[str, str, str]
    integers_ok: tuple[bool, bool, bool]
    minimal_polynomials: tuple[str, str, str]
    trace_field: dict
    invariant_field: dict
    signature: Signature
    real_place_signs: tuple[tuple[dict, int, int], ...]
    ramified_all_real: bool | None  # None when the symbol degenerates
    free_product_status: str
    free_product_method: str
    verdict: str
    hilbert: dict | None = None
    notes: tuple[str, ...] = field(default=(FINITE_COVOLUME_NOTE,))

    @property
    def condition_1(self) -> bool:
        return all(self.integers_ok)

    @property
    def condition_2(self) -> bool:
        return self.signature.complex_places == 1

    def as_dict(self) -> dict:
        return {
            "params": list(self.params),
            "condition_1": {"integers_ok": list(self.integers_ok), "minimal_polynomials": list(self.minimal_polynomials)},
            "trace_field": self.trace_field,
            "invariant_trace_field": self.invariant_field,
            "condition_2": {
                "signature": [self.signature.real_places, self.signature.complex_places],
                "ok": self.condition_2,
            },
            "condition_3": {
                "hilbert_symbol": self.hilbert,
                "real_place_signs": [
                    {"embedding": emb, "sign_a": sa, "sign_b": sb} for emb, sa, sb in self.real_place_signs
                ],
                "ramified_at_all_real_places": self.ramified_all_real,
            },
            "condition_4": {"free_product_status": self.free_product_status, "method": self.free_product_method},
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def free_product_status(
    p: Params, rho_star="rounded", precision: int = DEFAULT_PRECISION, precision_cap: int = DEFAULT_PRECISION_CAP
) -> tuple[str, str]:
    """(status, method). Regular groups try the annulus bound before the circle test."""
    if p.is_regular():
        try:
            if splits_by_annulus(p.rho0, rho_star):
                return SPLITS, f"annulus bound |rho| >= rho* ({rho_star})"
        except PrecisionExhausted:
            pass
    try:
        res = circle_disjointness(build_representation(p, precision), precision_cap)
    except (DegenerateCircle, PrecisionExhausted) as exc:
        return UNKNOWN, f"circle test unavailable: {exc}"
    if res.status == DISJOINT:
        return SPLITS, "diameter circles bound disjoint disks " + "/".join(res.witness)
    if res.status == INTERSECTING:
        i, j = res.crossing_pair
        return NOT_SPLIT, f"diameter circles C{i} and C{j} cross"
    return UNKNOWN, "circle test undecided"


def arithmeticity_test(
    p: Params, rho_star="rounded", precision: int = DEFAULT_PRECISION, precision_cap: int = DEFAULT_PRECISION_CAP
) -> ArithmeticityReport:
    vals = exact_params(p)
    ints = tuple(is_algebraic_integer(r) for r in vals)
    minpolys = tuple(str(minimal_polynomial(r)) for r in vals)
    tf = trace_field(p)
    k = invariant_trace_field(p)
    sig = k.signature()
    fp_status, fp_method = free_product_status(p, rho_star, precision, precision_cap)

    if fp_status == SPLITS:
        verdict = "splits_free_product"
    elif not all(ints):
        verdict = "fails_condition_1"
    elif sig.complex_places != 1:
        verdict = "fails_condition_2"
    else:
        verdict = None

    notes = [FINITE_COVOLUME_NOTE]
    signs: list[tuple[dict, int, int]] = []
    ramified = None
    hilbert = None
    try:
        h = hilbert_entries(p, k)
    except DegenerateSymbol as exc:
        if verdict is None:
            raise
        notes.append(f"condition 3 not evaluated: {exc}")
    else:
        hilbert = h.describe()
        for emb in k.real_places():
            sa = real_embedding_sign(h.a, emb, precision, precision_cap)
            sb = real_embedding_sign(h.b, emb, precision, precision_cap)
            signs.append((emb.describe(), sa, sb))
        ramified = all(sa < 0 and sb < 0 for _, sa, sb in signs)
        try:
            alt = _ramified(hilbert_entries(p, k, "matrix"), k, precision, precision_cap)
        except DegenerateSymbol:
            alt = None
            notes.append("the matrix-convention second entry vanishes")
        if alt is not None and alt != ramified:
            notes.append(
                "condition 3 depends on the sign of rho0 rho1 rho2 in b: "
                f"ramified at all real places is {ramified} with the displayed entries, {alt} with the matrix entries"
            )
        if verdict is None:
            verdict = "nearly_arithmetic_candidate" if ramified else "fails_condition_3"
    if verdict == "nearly_arithmetic_candidate" and fp_status == UNKNOWN:
        notes.append("condition 4 unsettled: the circle test was inconclusive")

    return ArithmeticityReport(
        params=tuple(str(v) for v in vals),
        integers_ok=ints,
        minimal_polynomials=minpolys,
        trace_field=tf.describe(),
        invariant_field=k.describe(),
        signature=sig,
        real_place_signs=tuple(signs),
        ramified_all_real=ramified,
        free_product_status=fp_status,
        free_product_method=fp_method,
        verdict=verdict,
        hilbert=hilbert,
        notes=tuple(notes),
    )


def _ramified(h: HilbertSymbolData, k: Subfield, precision: int, precision_cap: int) -> bool:
    return all(
        real_embedding_sign(h.a, e, precision, precision_cap) < 0 and real_embedding_sign(h.b, e, precision, precision_cap) < 0
        for e in k.real_places()
    )


def permuted(p: Params, order=(1, 2, 0)) -> Params:
    """Reorder parameters, e.g. to move a zero away from rho0."""
    v = p.values
    return Params(*(v[i] for i in order))


__all__ = [
    "ArithmeticityReport",
    "HilbertSymbolData",
    "arithmeticity_test",
    "exact_params",
    "free_product_status",
    "hilbert_entries",
    "invariant_trace_field",
    "permuted",
    "trace_field",
]
