"""Regular triangle groups over imaginary quadratic fields.

A regular parameter of degree two over Q(sqrt(-d)) that is an algebraic
integer has the form rho = k/2 + sqrt(-d)/2 with 4 | k^2 + d. Candidates with
|rho| below a bound are generated, then filtered in stages.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from flint import arb

from . import balls
from .balls import DEFAULT_PRECISION
from .klein import DISJOINT, RHO_STAR_ROUNDED, UNDECIDED, at_least, circle_disjointness, rho_star_value
from .numberfield import (
    FieldElement,
    NumberField,
    _squarefree_part,
    is_algebraic_integer,
    quadratic_label,
    subfield_generated,
)
from .polynomials import Poly
from .rep import build_regular

STAGES = ("integrality", "complex_places", "annulus", "exact_circle")


@lru_cache(maxsize=None)
def quadratic_field(d_sf: int) -> NumberField:
    """Q(sqrt(-d_sf)) as Q[t]/(t^2 + d_sf)."""
    return NumberField(Poly([d_sf, 0, 1]))


def split_square(d: int) -> tuple[int, int]:
    """d = m^2 * d_sf with d_sf squarefree; returns (m, d_sf)."""
    d_sf = _squarefree_part(d)
    m = math.isqrt(d // d_sf)
    return m, d_sf


def format_rho(k: int, d: int) -> str:
    """Text in the table's style: '-1/2 + √-27/2' for odd k, '-1 + √-7' for even k."""
    if k % 2:
        return f"{k}/2 + √-{d}/2"
    if d % 4:
        raise ValueError(f"k = {k} even needs 4 | d, got d = {d}")
    root = f"√-{d // 4}"
    return root if k == 0 else f"{k // 2} + {root}"


@dataclass(frozen=True)
class QuadraticCandidate:
    k: int
    d: int

    def __post_init__(self):
        if self.d < 1 or (self.k * self.k + self.d) % 4:
            raise ValueError(f"(k, d) = ({self.k}, {self.d}) does not give an algebraic integer")

    @property
    def field(self) -> NumberField:
        return quadratic_field(split_square(self.d)[1])

    @property
    def rho(self) -> FieldElement:
        m, _ = split_square(self.d)
        kf = self.field
        return kf(Fraction(self.k, 2)) + kf(Fraction(m, 2)) * kf.gen

    @property
    def abs_squared(self) -> Fraction:
        return Fraction(self.k * self.k + self.d, 4)

    @property
    def field_label(self) -> str:
        return quadratic_label(-self.d)

    @property
    def text(self) -> str:
        return format_rho(self.k, self.d)

    @property
    def minimal_polynomial(self) -> Poly:
        return Poly([Fraction(self.k * self.k + self.d, 4), -self.k, 1])

    def sort_key(self) -> tuple[int, int, int]:
        return (split_square(self.d)[1], self.d, self.k)


def _bound_squared_ceiling(bound) -> Fraction:
    """An exact rational >= bound^2 (equal when the bound is rational)."""
    if isinstance(bound, arb):
        return balls.interval(bound)[1] ** 2
    return balls.as_rational(bound) ** 2


def enumerate_quadratic_candidates(bound=RHO_STAR_ROUNDED) -> list[QuadraticCandidate]:
    """All (k, d) with d >= 1, 4 | k^2 + d and (k^2 + d)/4 <= bound^2.

    Im rho > 0 throughout; rho and -conj(rho) are kept as separate candidates.
    """
    b2 = _bound_squared_ceiling(bound)
    if b2 <= 0:
        raise ValueError("bound must be positive")
    top = math.floor(4 * b2)  # k^2 + d <= 4 bound^2
    out = []
    kmax = math.isqrt(top)
    for k in range(-kmax, kmax + 1):
        for d in range(1, top - k * k + 1):
            if (k * k + d) % 4 == 0:
                out.append(QuadraticCandidate(k, d))
    return sorted(out, key=QuadraticCandidate.sort_key)


@dataclass
class CandidateRow:
    index: int
    candidate: QuadraticCandidate
    stages: dict = field(default_factory=dict)  # stage -> "pass" | "removed" | "skipped"
    invariant_field: str = ""
    circle_status: str = ""
    circle_witness: str = ""

    @property
    def survives(self) -> bool:
        return all(v == "pass" for v in self.stages.values())

    def removed_at(self) -> str | None:
        for s in STAGES:
            if self.stages.get(s) == "removed":
                return s
        return None

    def as_dict(self) -> dict:
        c = self.candidate
        return {
            "index": self.index,
            "k": c.k,
            "d": c.d,
            "rho": c.text,
            "field": c.field_label,
            "invariant_field": self.invariant_field,
            **{f"stage_{s}": self.stages.get(s, "") for s in STAGES},
            "circle_status": self.circle_status,
            "circle_witness": self.circle_witness,
        }


@dataclass
class CandidateTable:
    rows: list[CandidateRow]
    bound: str
    rho_star: str
    precision: int

    def survivors(self, through: str = "exact_circle") -> list[CandidateRow]:
        upto = STAGES[: STAGES.index(through) + 1]
        return [r for r in self.rows if all(r.stages.get(s) == "pass" for s in upto)]

    def counts(self) -> dict:
        return {s: len(self.survivors(s)) for s in STAGES}


def _stage_circle(c: QuadraticCandidate, precision: int):
    res = circle_disjointness(build_regular(c.rho, precision))
    witness = "/".join(res.witness) if res.witness else ""
    return res.status, witness


def filter_nearly_arithmetic(
    cands: list[QuadraticCandidate],
    rho_star="rounded",
    precision: int = 256,
    bound_label: str = "",
) -> CandidateTable:
    rows = []
    for idx, c in enumerate(cands, 1):
        row = CandidateRow(idx, c)
        rows.append(row)
        alive = True

        def mark(stage, ok):
            nonlocal alive
            if not alive:
                row.stages[stage] = "skipped"
                return
            row.stages[stage] = "pass" if ok else "removed"
            alive = ok

        rho = c.rho
        mark("integrality", is_algebraic_integer(rho))
        k_gamma = subfield_generated(rho.field, [rho * rho, rho * rho * rho])
        sig = k_gamma.signature()
        # rho is not real, so rho^2 and rho^3 are never both rational
        assert k_gamma.degree == 2 and sig.complex_places == 1, (c, k_gamma.describe())
        row.invariant_field = k_gamma.label
        mark("complex_places", sig.complex_places == 1)
        mark("annulus", alive and not at_least(rho, rho_star))
        if alive:
            row.circle_status, row.circle_witness = _stage_circle(c, precision)
        mark("exact_circle", row.circle_status != DISJOINT)
    return CandidateTable(rows, bound_label, str(rho_star), precision)


# --- reference table --------------------------------------------------------


@dataclass(frozen=True)
class ReferenceRow:
    n: int
    k: int
    d: int
    rho: str
    field: str


def load_reference() -> list[ReferenceRow]:
    text = resources.files("halfturns").joinpath("data/table1.csv").read_text(encoding="utf-8")
    rows = csv.DictReader(text.splitlines())
    return [ReferenceRow(int(r["N"]), int(r["k"]), int(r["d"]), r["rho"], r["field"]) for r in rows]


@dataclass(frozen=True)
class ReferenceDiff:
    missing: tuple[ReferenceRow, ...]  # in the reference, not among survivors
    extra: tuple[QuadraticCandidate, ...]  # survivors absent from the reference

    @property
    def exact_match(self) -> bool:
        return not self.missing and not self.extra

    def as_dict(self) -> dict:
        return {
            "missing": [{"N": r.n, "rho": r.rho, "field": r.field} for r in self.missing],
            "extra": [{"k": c.k, "d": c.d, "rho": c.text, "field": c.field_label} for c in self.extra],
            "exact_match": self.exact_match,
        }


def compare_with_reference(survivors, reference: list[ReferenceRow] | None = None) -> ReferenceDiff:
    reference = reference if reference is not None else load_reference()
    cands = [s.candidate if isinstance(s, CandidateRow) else s for s in survivors]
    have = {(c.k, c.d) for c in cands}
    ref = {(r.k, r.d) for r in reference}
    return ReferenceDiff(
        missing=tuple(r for r in reference if (r.k, r.d) not in have),
        extra=tuple(c for c in cands if (c.k, c.d) not in ref),
    )


def run_regular_enumeration(bound=RHO_STAR_ROUNDED, rho_star="rounded", precision: int = 256):
    """Enumerate, filter and diff against the reference. Returns (table, diff)."""
    cands = enumerate_quadratic_candidates(bound)
    table = filter_nearly_arithmetic(cands, rho_star, precision, bound_label=str(bound))
    return table, compare_with_reference(table.survivors())


__all__ = [
    "CandidateRow",
    "CandidateTable",
    "QuadraticCandidate",
    "ReferenceDiff",
    "ReferenceRow",
    "STAGES",
    "UNDECIDED",
    "compare_with_reference",
    "enumerate_quadratic_candidates",
    "filter_nearly_arithmetic",
    "format_rho",
    "load_reference",
    "quadratic_field",
    "rho_star_value",
    "run_regular_enumeration",
    "split_square",
]
