"""Discriminant bound behind the finiteness argument for regular groups.

For a parameter rho of degree n with one complex pair bounded by rho* and
real conjugates in [-2, 2], the field discriminant satisfies

    N(D) <= 4 rho*^2 K^(2n) 2^(n(n-1)) M_n,   K = rho*^2 + 4 rho* + 4,

where M_n is the maximum of prod_{i<j} (x_i - x_j)^2 over n points of [-1, 1].
Everything is computed in exact rationals when rho* is rational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .balls import as_rational
from .errors import ScanExhausted
from .klein import RHO_STAR_ROUNDED

N_SCAN_LIMIT = 200


@lru_cache(maxsize=None)
def _m_r_parts(r: int) -> tuple[int, int]:
    """Unreduced (numerator, denominator) of M_r, built from M_(r-1)."""
    if r == 3:
        return 2**2 * 3**3, 3**3  # the second product is empty at r = 3
    num, den = _m_r_parts(r - 1)
    j = 2 * r - 3
    return num * r**r * (r - 2) ** (r - 2), den * j**j


def m_r(r: int) -> Fraction:
    """2^2 3^3 ... r^r * 2^2 3^3 ... (r-2)^(r-2) / (3^3 5^5 ... (2r-3)^(2r-3))."""
    if r < 3:
        raise ValueError("M_r is defined for r >= 3")
    return Fraction(*_m_r_parts(r))


def log_m_r(r: int) -> float:
    """log M_r summed term by term (an independent route to m_r)."""
    s = sum(j * math.log(j) for j in range(2, r + 1))
    s += sum(j * math.log(j) for j in range(2, r - 1))
    s -= sum(j * math.log(j) for j in range(3, 2 * r - 2, 2))
    return s


def m_r_root(r: int) -> float:
    """M_r^(1/(r(r-1)))."""
    return math.exp(log_m_r(r) / (r * (r - 1)))


def K(rho_star=RHO_STAR_ROUNDED) -> Fraction:
    rho_star = as_rational(rho_star)
    return rho_star * rho_star + 4 * rho_star + 4


def discriminant_bound(n: int, rho_star=RHO_STAR_ROUNDED, k=None) -> Fraction:
    if n < 3:
        raise ValueError("the bound is stated for degree n >= 3")
    rho_star = as_rational(rho_star)
    k = K(rho_star) if k is None else as_rational(k)
    return 4 * rho_star**2 * k ** (2 * n) * Fraction(2) ** (n * (n - 1)) * m_r(n)


def bound_below_one(n: int, rho_star=RHO_STAR_ROUNDED) -> bool:
    """Exact test bound(n) < 1 by integer cross-multiplication (no gcd reductions)."""
    rho_star = as_rational(rho_star)
    k = K(rho_star)
    num, den = _m_r_parts(n)
    lhs = 4 * rho_star.numerator**2 * k.numerator ** (2 * n) * 2 ** (n * (n - 1)) * num
    rhs = rho_star.denominator**2 * k.denominator ** (2 * n) * den
    return lhs < rhs


def log10_bound(n: int, rho_star=RHO_STAR_ROUNDED, k=None) -> float:
    b = discriminant_bound(n, rho_star, k)
    return math.log10(b.numerator) - math.log10(b.denominator)


def n0(rho_star=RHO_STAR_ROUNDED, limit: int = N_SCAN_LIMIT, confirm: int = 20) -> int:
    """Smallest n >= 3 with bound(n) < 1 that stays below 1 for the next ``confirm`` degrees."""
    for n in range(3, limit + 1):
        if bound_below_one(n, rho_star):
            if all(bound_below_one(m, rho_star) for m in range(n + 1, n + confirm + 1)):
                return n
    raise ScanExhausted(f"bound(n) >= 1 for every n in [3, {limit}]")


@dataclass
class BoundReport:
    rho_star_used: Fraction
    K: Fraction
    m_values: list[tuple[int, Fraction]]
    n0: int | None
    bound_values: list[tuple[int, float]]  # (n, log10 bound(n))
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "rho_star_used": str(self.rho_star_used),
            "K": str(self.K),
            "K_decimal": float(self.K),
            "m_values": [{"r": r, "M_r": str(m), "M_r_root": m_r_root(r)} for r, m in self.m_values],
            "n0": self.n0,
            "log10_bound": [{"n": n, "log10_bound": v} for n, v in self.bound_values],
            "notes": self.notes,
        }


def bound_report(rho_star=RHO_STAR_ROUNDED, max_r: int = 10, max_n: int = 30, limit: int = N_SCAN_LIMIT) -> BoundReport:
    rho_star = as_rational(rho_star)
    notes = []
    try:
        first = n0(rho_star, limit)
    except ScanExhausted as exc:
        first = None
        notes.append(f"no n0: {exc}")
        tail = m_r_root(limit)
        notes.append(
            f"M_n^(1/(n(n-1))) = {tail:.4f} at n = {limit}, tending to 1/2 (the transfinite diameter of [-1, 1]); "
            "then 2^(n(n-1)) M_n does not decay and K^(2n) makes the bound grow"
        )
    return BoundReport(
        rho_star_used=rho_star,
        K=K(rho_star),
        m_values=[(r, m_r(r)) for r in range(3, max_r + 1)],
        n0=first,
        bound_values=[(n, log10_bound(n, rho_star)) for n in range(3, max_n + 1)],
        notes=notes,
    )
