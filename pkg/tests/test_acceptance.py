"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) for just the summary lines,
or through pytest, where the lines are repeated in the terminal summary.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

import numpy as np
from flint import fmpz_poly
from scipy.optimize import minimize

from halfturns import bounds, candidates, klein, relators
from halfturns.arith import arithmeticity_test
from halfturns.balls import contains_fraction, real_ball, working_precision
from halfturns.errors import DegenerateCircle, DegenerateParams, ScanExhausted
from halfturns.numberfield import NumberField, subfield_generated
from halfturns.polynomials import Poly, count_real_roots, is_squarefree
from halfturns.rep import Params, build_representation, is_line_matrix

RESULTS: list[str] = []


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    RESULTS.append(line)
    print(line, flush=True)
    return ok


def test_criterion_01_split_constants():
    t0 = time.perf_counter()
    sc = klein.compute_split_constants()
    elapsed = time.perf_counter() - t0
    lo, hi = klein.balls.interval(sc.beta_star)
    rlo, rhi = klein.balls.interval(sc.rho_star_computed)
    ok = Fraction("2.4944") <= lo and hi <= Fraction("2.4946") and Fraction("6.38") <= rlo and rhi <= Fraction("6.40")
    ok = ok and elapsed < 1.0
    detail = f"beta* in [{float(lo):.10f}, {float(hi):.10f}], 1/beta*^2 + beta*^2 = {float(rlo):.8f}, {elapsed:.3f} s"
    assert record(1, ok, detail)


def test_criterion_02_K():
    k = bounds.K(Fraction(32, 5))
    ok = k == Fraction(7056, 100)
    assert record(2, ok, f"K(6.4) = {k} = {float(k)}")


def _brute_m3() -> float:
    rng = np.random.default_rng(0)

    def f(x):
        x = np.tanh(x)
        return -math.prod((a - b) ** 2 for a, b in itertools.combinations(x, 2))

    best = min(
        minimize(f, rng.normal(size=3) * 2, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 20000}).fun
        for _ in range(20)
    )
    return -best


def test_criterion_03_m_r():
    exact = bounds.m_r(3) == 4
    brute = _brute_m3()
    numeric = abs(brute - 4) < 1e-6
    roots = [bounds.m_r_root(r) for r in range(3, 31)]
    decreasing = all(a > b for a, b in zip(roots, roots[1:]))
    near = abs(roots[-1] - 0.25) <= 0.05
    ok = exact and numeric and decreasing and near
    detail = (
        f"M_3 = {bounds.m_r(3)} (brute {brute:.9f}), decreasing={decreasing}, "
        f"M_30^(1/870) = {roots[-1]:.4f} vs 0.25 +- 0.05 (limit is 1/2)"
    )
    record(3, ok, detail)
    assert ok, detail


def test_criterion_04_n0():
    try:
        n = bounds.n0(Fraction(32, 5))
    except ScanExhausted as exc:
        detail = f"no n0: {exc}; log10 bound(3) = {bounds.log10_bound(3):.1f}, log10 bound(30) = {bounds.log10_bound(30):.1f}"
        record(4, False, detail)
        raise AssertionError(detail)
    ok = n <= 30 and all(bounds.bound_below_one(m) for m in range(n, n + 21))
    assert record(4, ok, f"n0 = {n}")


def test_criterion_05_table():
    t0 = time.perf_counter()
    table, diff = candidates.run_regular_enumeration(Fraction(32, 5), "rounded", 256)
    elapsed = time.perf_counter() - t0
    ref = candidates.load_reference()
    keys = {(r.k, r.d) for r in ref}

    def alive(stage):
        return {(r.candidate.k, r.candidate.d) for r in table.survivors(stage)}

    after_places = keys <= alive("complex_places")
    after_annulus = keys <= alive("annulus")
    ok = after_places and after_annulus and not diff.missing and elapsed < 300
    missing = ", ".join(f"row {r.n} ({r.rho})" for r in diff.missing) or "none"
    detail = (
        f"{len(table.rows)} candidates, {len(table.survivors())} survivors, "
        f"reference rows after places/annulus: {after_places}/{after_annulus}, "
        f"missing: {missing}, extra: {len(diff.extra)}, {elapsed:.1f} s"
    )
    record(5, ok, detail)
    assert ok, detail


def _random_params(rng: random.Random):
    kind = rng.random()
    if kind < 0.5:
        d = rng.choice([1, 2, 3, 7, 11, 15])
        k = NumberField(Poly([d, 0, 1]))
        vals = [k(Fraction(rng.randint(-12, 12), rng.randint(1, 4))) + k(Fraction(rng.randint(-6, 6), rng.randint(1, 4))) * k.gen for _ in range(3)]
        return Params(*vals)
    vals = [(Fraction(rng.randint(-900, 900), 100), Fraction(rng.randint(-900, 900), 100)) for _ in range(3)]
    return Params(*vals)


def test_criterion_06_round_trip():
    rng = random.Random(2024)
    done = bad = 0
    while done < 100:
        p = _random_params(rng)
        try:
            t = build_representation(p, 128)
        except DegenerateParams:
            continue
        done += 1
        with working_precision(128):
            A, B, C = t.matrices
            traces = ((A @ B).trace(), (A @ C).trace(), (B @ C).trace())
            good = all(tr.overlaps(want) for tr, want in zip(traces, p.balls(128)))
            good = good and all(is_line_matrix(m) for m in t.matrices)
        bad += not good
    assert record(6, bad == 0, f"{done} triples, {bad} failures")


def test_criterion_07_arith():
    k2 = NumberField.parse("t^2 + 2")
    r = arithmeticity_test(Params.regular(k2.gen))
    sig = (r.signature.real_places, r.signature.complex_places)
    ok1 = r.verdict == "nearly_arithmetic_candidate" and r.invariant_field["label"] == "Q(√-2)" and sig == (0, 1)
    r3 = arithmeticity_test(Params.regular(-3))
    r7 = arithmeticity_test(Params.regular(-7))
    ok2 = r3.verdict == "fails_condition_2"
    ok3 = r7.verdict == "splits_free_product" and r7.free_product_method.startswith("annulus")
    detail = f"sqrt(-2): {r.verdict} {r.invariant_field['label']} {sig}; -3: {r3.verdict}; -7: {r7.verdict} via {r7.free_product_method}"
    assert record(7, ok1 and ok2 and ok3, detail)


def test_criterion_08_presentations():
    outcome = {}
    parts = []
    for name in ("rho-3-trailing-a", "rho-3-trailing-x", "rho-1", "rho+1"):
        checks = relators.verify_all_conventions(relators.PRESENTATIONS[name])
        holding = [c for c in checks if c.all_hold and all(r.radius < 1e-20 for _, _, r in c.results)]
        outcome[name] = bool(holding)
        orders = checks[0].orders
        parts.append(f"{name}: {len(holding)}/16 conventions hold, orders {[n for _, n in orders]}")
    ok = outcome["rho-1"] and outcome["rho+1"]
    detail = "; ".join(parts)
    record(8, ok, detail)
    assert ok, detail


def test_criterion_09_exceptional_sequence():
    k = NumberField.parse("t^2 + 3")
    statuses = []
    for n in range(11):
        p = Params(k(Fraction(n, 2)) + k.gen / 2, (k(1) + k.gen) / 2, (k(1) + k.gen) / 2)
        statuses.append(klein.circle_disjointness(build_representation(p, 256)).status)
    ok = all(s == klein.INTERSECTING for s in statuses)
    assert record(9, ok, f"n = 0..10 statuses: {sorted(set(statuses))}")


def test_criterion_10_properties():
    rng = random.Random(10)
    # ball containment on random exact rational expressions
    ball_bad = 0
    for _ in range(10_000):
        a, b, c = (Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 10**4)) for _ in range(3))
        if c == 0:
            continue
        with working_precision(rng.choice([64, 128, 256])):
            x = (real_ball(a) * real_ball(b) - real_ball(c)) / real_ball(c)
        ball_bad += not contains_fraction(x, (a * b - c) / c)
    # Sturm counts against flint's numeric root isolation
    sturm_bad = tested = 0
    while tested < 1000:
        deg = rng.randint(1, 8)
        cs = [rng.randint(-30, 30) for _ in range(deg)] + [rng.choice([-3, -2, -1, 1, 2, 3])]
        p = Poly(cs)
        if not is_squarefree(p):
            continue
        tested += 1
        numeric = sum(1 for z, _ in fmpz_poly(cs).complex_roots() if z.imag.is_zero())
        sturm_bad += count_real_roots(p) != numeric
    # subfield idempotence
    field = NumberField.parse("t^6 + t^3 + 1")
    sub_bad = 0
    for _ in range(30):
        x = field(Poly([rng.randint(-3, 3) for _ in range(6)]))
        s = subfield_generated(field, [x * x])
        again = subfield_generated(field, list(s.basis))
        sub_bad += again.degree != s.degree or subfield_generated(field, [s.primitive]).degree != s.degree
    # disk-choice certificate stability under precision doubling
    stab_bad = compared = 0
    for _ in range(60):
        p = _random_params(rng)
        try:
            lo = klein.circle_disjointness(build_representation(p, 128), 128)
            hi = klein.circle_disjointness(build_representation(p, 256), 256)
        except (DegenerateParams, DegenerateCircle, klein.PrecisionExhausted):
            continue
        if lo.status != klein.UNDECIDED and hi.status != klein.UNDECIDED:
            compared += 1
            stab_bad += lo.status != hi.status or lo.witness != hi.witness
    ok = ball_bad == sturm_bad == sub_bad == stab_bad == 0
    detail = (
        f"ball fuzz 10000 ({ball_bad} bad), Sturm vs numeric 1000 ({sturm_bad} bad), "
        f"subfield idempotence 30 ({sub_bad} bad), precision doubling {compared} ({stab_bad} bad)"
    )
    assert record(10, ok, detail)


if __name__ == "__main__":
    import sys

    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
