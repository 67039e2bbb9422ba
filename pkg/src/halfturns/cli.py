"""Command-line entry point.

Exit codes: 0 success, 1 domain error, 2 usage error, 3 precision exhausted.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import arith, bounds, candidates, integers, klein, relators
from .balls import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP, as_rational, interval
from .errors import HalfTurnsError, PrecisionExhausted
from .numberfield import NumberField
from .plot import plot_circles
from .report import FORMATS, Report, emit_report
from .rep import Params, build_regular, build_representation


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION
    precision_cap: int = DEFAULT_PRECISION_CAP
    rho_star_choice: str = "6.4"
    output_format: str = "json"
    output_path: str | None = None

    def __post_init__(self):
        if not 64 <= self.precision_bits <= self.precision_cap:
            raise UsageError(f"need 64 <= precision ({self.precision_bits}) <= cap ({self.precision_cap})")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format}")

    @property
    def rho_star(self):
        """'computed' or an exact rational (6.4 -> 32/5)."""
        if self.rho_star_choice == "computed":
            return "computed"
        try:
            return as_rational(self.rho_star_choice)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--rho-star expects a number or 'computed', got {self.rho_star_choice!r}") from exc


# --- argument parsing --------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--precision", type=int, default=int(os.environ.get("HALFTURNS_PRECISION", DEFAULT_PRECISION)))
    p.add_argument("--precision-cap", type=int, default=DEFAULT_PRECISION_CAP)
    p.add_argument("--rho-star", default="6.4", help="6.4 (default), 'computed', or a number")
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def _params_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", help="defining polynomial in t, e.g. 't^2+3'; parameters are then elements like '-1/2+t/2'")
    p.add_argument("--rho", help="regular parameter (sets rho0 = rho1 = rho2)")
    p.add_argument("--rho0")
    p.add_argument("--rho1")
    p.add_argument("--rho2")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="halfturns", description="Groups generated by three half-turns.")
    sub = parser.add_subparsers(dest="group", required=True)

    rep = sub.add_parser("rep").add_subparsers(dest="action", required=True)
    _params_flags(rep.add_parser("build", parents=[common], help="matrices A, B, C with certified balls"))

    ar = sub.add_parser("arith").add_subparsers(dest="action", required=True)
    _params_flags(ar.add_parser("test", parents=[common], help="four-condition arithmeticity test"))

    kl = sub.add_parser("klein").add_subparsers(dest="action", required=True)
    _params_flags(kl.add_parser("check", parents=[common], help="invariant-circle splitting test"))
    c = kl.add_parser("constants", parents=[common], help="beta* and rho* by certified bisection")
    c.add_argument("--tolerance", default="1e-12")
    sc = kl.add_parser("scan", parents=[common], help="search for counterexamples to the splitting conjecture")
    sc.add_argument("--region", action="append", default=[], help="re_lo,re_hi,im_lo,im_hi (once, or once per parameter)")
    sc.add_argument("--sampler", choices=("grid", "random"), default="grid")
    sc.add_argument("--count", type=int, default=5)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--threshold", help="defaults to --rho-star")

    en = sub.add_parser("enumerate").add_subparsers(dest="action", required=True)
    reg = en.add_parser("regular", parents=[common], help="candidate list over imaginary quadratic fields")
    reg.add_argument("--bound", default=None, help="|rho| bound for the candidates (default: rho*)")
    ints = en.add_parser("integers", parents=[common], help="algebraic integers with one complex pair")
    ints.add_argument("--max-degree", type=int, default=2)
    ints.add_argument("--bound", default=None, help="bound on the complex pair (default: rho*)")
    ints.add_argument("--real-bound", default="2")

    bd = sub.add_parser("bounds", parents=[common], help="finiteness bound and the constants K, M_r")
    bd.add_argument("--max-n", type=int, default=30)
    bd.add_argument("--max-r", type=int, default=10)

    rl = sub.add_parser("relators").add_subparsers(dest="action", required=True)
    v = rl.add_parser("verify", parents=[common], help="check the built-in presentations")
    v.add_argument("--presentation", choices=sorted(relators.PRESENTATIONS) + ["all"], default="all")
    v.add_argument("--all-conventions", action="store_true", help="try all lift signs and conjugation")
    s = rl.add_parser("search", parents=[common], help="breadth-first relator search")
    _params_flags(s)
    s.add_argument("--max-length", type=int, default=8)

    pl = sub.add_parser("plot").add_subparsers(dest="action", required=True)
    _params_flags(pl.add_parser("circles", parents=[common], help="SVG of the diameter circles"))
    return parser


def _config(ns) -> RunConfig:
    return RunConfig(ns.precision, ns.precision_cap, ns.rho_star, ns.format, ns.out)


def _params(ns) -> Params:
    r0 = ns.rho0 or ns.rho
    r1 = ns.rho1 or ns.rho or r0
    r2 = ns.rho2 or ns.rho or r0
    if r0 is None:
        raise UsageError("give --rho or --rho0 (and optionally --rho1, --rho2)")
    try:
        field = NumberField.parse(ns.field) if ns.field else None
        return Params.parse(r0, r1, r2, field)
    except HalfTurnsError:
        raise
    except (ValueError, SyntaxError, TypeError, ZeroDivisionError, KeyError) as exc:
        raise UsageError(f"cannot parse parameters: {exc}") from exc


def _triple(ns, cfg: RunConfig):
    p = _params(ns)
    if p.is_regular():
        return build_regular(p.rho0, cfg.precision_bits)
    return build_representation(p, cfg.precision_bits)


def _region(texts: list[str]) -> list[tuple]:
    if not texts:
        texts = ["6.4,10,0,0"]
    boxes = []
    for t in texts:
        parts = t.split(",")
        if len(parts) != 4:
            raise UsageError(f"--region expects re_lo,re_hi,im_lo,im_hi, got {t!r}")
        try:
            boxes.append(tuple(Fraction(x.strip()) for x in parts))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if len(boxes) == 1:
        boxes *= 3
    if len(boxes) != 3:
        raise UsageError("--region must be given once or three times")
    return boxes


# --- commands ----------------------------------------------------------------


def cmd_rep_build(ns, cfg):
    t = _triple(ns, cfg)
    return {"triple": t.as_dict()}, [], None


def cmd_arith_test(ns, cfg):
    r = arith.arithmeticity_test(_params(ns), cfg.rho_star, cfg.precision_bits, cfg.precision_cap)
    return r.as_dict(), [], None


def cmd_klein_check(ns, cfg):
    t = _triple(ns, cfg)
    res = klein.circle_disjointness(t, cfg.precision_cap)
    out = {"circle_test": res.as_dict(), "rho_star_used": str(cfg.rho_star)}
    if t.params.is_regular():
        out["annulus_test_splits"] = klein.splits_by_annulus(t.params.rho0, cfg.rho_star)
    return out, [], None


def cmd_klein_constants(ns, cfg):
    sc = klein.compute_split_constants(tolerance=Fraction(ns.tolerance), precision=cfg.precision_bits)
    out = sc.as_dict()
    out["monotonicity_certified_on_[2,4]"] = klein.certify_monotonicity()
    return out, [], None


def cmd_klein_scan(ns, cfg):
    threshold = ns.threshold if ns.threshold is not None else cfg.rho_star
    if isinstance(threshold, str) and threshold != "computed":
        threshold = as_rational(threshold)
    samples = klein.conjecture_scan(_region(ns.region), ns.sampler, ns.count, threshold, ns.seed, cfg.precision_bits)
    rows = [s.row() for s in samples]
    return {"threshold": str(threshold), "potential_counterexamples": len(rows)}, rows, None


def cmd_enumerate_regular(ns, cfg):
    bound = cfg.rho_star if ns.bound is None else as_rational(ns.bound)
    if bound == "computed":
        bound = klein.rho_star_value("computed")
    table, diff = candidates.run_regular_enumeration(bound, cfg.rho_star, max(cfg.precision_bits, 256))
    rows = [r.as_dict() for r in table.rows]
    survivors = table.survivors()
    ref = {(r.k, r.d): r.n for r in candidates.load_reference()}
    three = [
        {"N": i, "rho": r.candidate.text, "field": r.candidate.field_label, "reference_N": ref.get((r.candidate.k, r.candidate.d))}
        for i, r in enumerate(survivors, 1)
    ]
    results = {
        "bound": str(bound),
        "rho_star_used": str(cfg.rho_star),
        "candidates": len(table.rows),
        "survivors_per_stage": table.counts(),
        "reference_rows": len(ref),
        "diff": diff.as_dict(),
    }
    return results, rows, three


def cmd_enumerate_integers(ns, cfg):
    bound = cfg.rho_star if ns.bound is None else as_rational(ns.bound)
    if bound == "computed":
        bound = Fraction(str(float(klein.rho_star_value("computed").mid())))
    polys = integers.enumerate_bounded_algebraic_integers(ns.max_degree, bound, as_rational(ns.real_bound))
    rows = [{"degree": p.degree, "polynomial": str(p)} for p in polys]
    return {"count": len(rows), "complex_bound": str(bound), "real_bound": ns.real_bound}, rows, None


def cmd_bounds(ns, cfg):
    rs = cfg.rho_star
    if rs == "computed":
        # rational upper end of the certified ball; the bound increases with rho*
        rs = interval(klein.rho_star_value("computed"))[1]
    rep = bounds.bound_report(rs, ns.max_r, ns.max_n)
    rows = [{"n": n, "log10_bound": v} for n, v in rep.bound_values]
    return rep.as_dict(), rows, None


def cmd_relators_verify(ns, cfg):
    names = sorted(relators.PRESENTATIONS) if ns.presentation == "all" else [ns.presentation]
    prec = max(cfg.precision_bits, relators.RELATOR_PRECISION)
    checks, rows = [], []
    for name in names:
        pres = relators.PRESENTATIONS[name]
        found = relators.verify_all_conventions(pres, prec) if ns.all_conventions else [relators.verify_presentation(pres, prec)]
        for chk in found:
            d = chk.as_dict()
            checks.append(d)
            for r in d["relators"]:
                rows.append({"presentation": name, "convention": d["convention"], **r})
    return {"checks": checks}, rows, None


def cmd_relators_search(ns, cfg):
    t = _triple(ns, cfg)
    if ns.max_length > 12:
        raise UsageError("--max-length is capped at 12")
    words = relators.search_short_relators(t, ns.max_length, max(cfg.precision_bits, relators.RELATOR_PRECISION))
    rows = [{"length": len(w), "word": str(w)} for w in words]
    return {"params": t.params.labels(), "found": len(rows)}, rows, None


def cmd_plot_circles(ns, cfg):
    svg = plot_circles(_triple(ns, cfg))
    return svg, [], None


COMMANDS = {
    ("rep", "build"): cmd_rep_build,
    ("arith", "test"): cmd_arith_test,
    ("klein", "check"): cmd_klein_check,
    ("klein", "constants"): cmd_klein_constants,
    ("klein", "scan"): cmd_klein_scan,
    ("enumerate", "regular"): cmd_enumerate_regular,
    ("enumerate", "integers"): cmd_enumerate_integers,
    ("bounds", None): cmd_bounds,
    ("relators", "verify"): cmd_relators_verify,
    ("relators", "search"): cmd_relators_search,
    ("plot", "circles"): cmd_plot_circles,
}


def _write(data: bytes, path: str | None) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def dispatch(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(ns)
        fn = COMMANDS[(ns.group, getattr(ns, "action", None))]
        results, rows, table = fn(ns, cfg)
        if isinstance(results, str):  # svg
            _write(results.encode("utf-8"), cfg.output_path)
            return 0
        cfg_echo = asdict(cfg)
        report = Report(["halfturns", *argv], cfg_echo, results, rows, table)
        _write(emit_report(report, cfg.output_format), cfg.output_path)
        return 0
    except UsageError as exc:
        print(f"halfturns: usage error: {exc}", file=sys.stderr)
        return 2
    except PrecisionExhausted as exc:
        print(f"halfturns: precision exhausted: {exc}", file=sys.stderr)
        return 3
    except HalfTurnsError as exc:
        print(f"halfturns: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())
