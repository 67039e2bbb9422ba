from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from fractions import Fraction
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfturns import relators
from halfturns.balls import working_precision
from halfturns.cli import RunConfig, UsageError, dispatch
from halfturns.plot import plot_circles
from halfturns.report import Report, emit_report, strip_timestamps
from halfturns.rep import build_regular, build_representation, Params

words = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1))), min_size=1, max_size=8)


@pytest.fixture(scope="module")
def omega_triple():
    return relators.triple_for(relators.PRESENTATIONS["rho-1"])


def test_parser_rejects_bad_tokens():
    with pytest.raises(ValueError):
        relators.parse_word("A b C'")
    with pytest.raises(ValueError):
        relators.parse_word("")
    w = relators.parse_word("c^-1 b^-1 a^-1 b c a")
    assert str(w) == "c^-1 b^-1 a^-1 b c a"
    assert w.compact() == "c'b'a'bca"


def test_psl_reduction():
    w = relators.parse_word("a a^-1 b c c")
    assert str(w.psl_reduced()) == "b"


@settings(max_examples=50, deadline=None)
@given(words, words)
def test_evaluation_is_a_homomorphism(u, v):
    t = build_regular(-7, 128)
    wu, wv = relators.GroupWord(tuple(u)), relators.GroupWord(tuple(v))
    with working_precision(128):
        prod = relators.evaluate_word(wu, t) @ relators.evaluate_word(wv, t)
    whole = relators.evaluate_word(wu + wv, t)
    for x, y in zip(prod.entries(), whole.entries()):
        assert x.overlaps(y)


def test_generators_square_to_minus_identity(omega_triple):
    for g in "abc":
        r = relators.is_relator(relators.parse_word(f"{g} {g}"), omega_triple)
        assert r.status == relators.HOLDS and r.sign == -1 and r.radius < 1e-20


def test_relator_rotation_and_inverse_invariance(omega_triple):
    w = relators.GroupWord(relators.parse_word("a b c b").letters * 3)
    assert relators.is_relator(w, omega_triple).status == relators.HOLDS
    for rot in w.rotations():
        assert relators.is_relator(rot, omega_triple).status == relators.HOLDS
    inv = relators.GroupWord(tuple((g, -e) for g, e in reversed(w.letters)))
    assert relators.is_relator(inv, omega_triple).status == relators.HOLDS


def test_fails_is_certified(omega_triple):
    assert relators.is_relator(relators.parse_word("a b"), omega_triple).status == relators.FAILS


def test_word_orders(omega_triple):
    assert relators.word_order(relators.parse_word("a b c b"), omega_triple) == 3
    # tr(AB) is not real, so AB is loxodromic
    assert relators.word_order(relators.parse_word("a b"), omega_triple) is None


def test_search_finds_squares_and_short_relators(omega_triple):
    found = relators.search_short_relators(omega_triple, 6)
    texts = {w.compact() for w in found}
    assert {"aa", "bb", "cc"} <= texts
    assert "ab" not in texts and "abcb" not in texts


def test_search_length_cap(omega_triple):
    with pytest.raises(ValueError):
        relators.search_short_relators(omega_triple, 13)


def test_conventions_cover_all_lifts():
    assert len(relators.CONVENTIONS) == 16
    assert len({c.label() for c in relators.CONVENTIONS}) == 16


# --- reports and CLI ----------------------------------------------------------


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(precision_bits=32)
    with pytest.raises(UsageError):
        RunConfig(precision_bits=256, precision_cap=128)
    assert RunConfig(rho_star_choice="6.4").rho_star == Fraction(32, 5)


def test_json_round_trip():
    rep = Report(["x"], {"a": 1}, {"b": [1, 2], "c": {"d": "e"}}, rows=[{"k": 1}])
    data = json.loads(emit_report(rep, "json"))
    assert data == json.loads(json.dumps(rep.as_dict()))


def test_empty_documents():
    rep = Report([], {}, {})
    for fmt in ("json", "csv", "markdown", "text"):
        emit_report(rep, fmt)
    assert json.loads(emit_report(rep, "json"))["results"] == {}
    assert emit_report(rep, "csv") == b""


def test_markdown_table_header():
    rep = Report(["e"], {}, {}, table=[{"N": 1, "rho": "√-2", "field": "Q(√-2)"}])
    text = emit_report(rep, "markdown").decode()
    assert "N | ρ | Field" in text and "1 | √-2 | Q(√-2)" in text


def _run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_exit_codes(capsys):
    assert _run(capsys, "rep", "build", "--rho0", "2", "--rho1", "2", "--rho2", "2")[0] == 1
    code, out, _ = _run(capsys, "arith", "test", "--field", "t^2+2", "--rho0", "t", "--rho1", "t", "--rho2", "t")
    assert code == 0 and json.loads(out)["results"]["verdict"] == "nearly_arithmetic_candidate"
    code, out, _ = _run(capsys, "bounds", "--rho-star", "6.4")
    assert code == 0 and json.loads(out)["results"]["K"] == "1764/25"
    assert _run(capsys, "rep", "build", "--rho", "1", "--precision", "10")[0] == 2
    assert _run(capsys, "nonsense")[0] == 2
    assert _run(capsys, "rep", "build")[0] == 2


def test_cli_precision_exhausted(capsys, monkeypatch):
    from halfturns import cli
    from halfturns.errors import PrecisionExhausted

    def boom(ns, cfg):
        raise PrecisionExhausted("cap reached")

    monkeypatch.setitem(cli.COMMANDS, ("rep", "build"), boom)
    assert _run(capsys, "rep", "build", "--rho", "3")[0] == 3


def test_cli_deterministic_modulo_timestamp(capsys):
    argv = ("klein", "check", "--rho=-7")
    _, a, _ = _run(capsys, *argv)
    _, b, _ = _run(capsys, *argv)
    assert strip_timestamps(json.loads(a)) == strip_timestamps(json.loads(b))


def test_cli_enumerate_markdown(capsys, tmp_path):
    out = tmp_path / "t.md"
    code, _, _ = _run(capsys, "enumerate", "regular", "--bound", "2", "--format", "markdown", "--out", str(out))
    text = out.read_text()
    assert code == 0 and text.splitlines()[2] == "N | ρ | Field"


def test_cli_plot(capsys, tmp_path):
    out = tmp_path / "c.svg"
    assert _run(capsys, "plot", "circles", "--rho=-7", "--out", str(out))[0] == 0
    root = ET.parse(out).getroot()
    assert root.tag.endswith("svg")


def test_plot_minus_seven_has_annulus():
    svg = plot_circles(build_regular(-7, 128))
    assert 'class="annulus"' in svg and "certified_disjoint_disks" in svg
    svg = plot_circles(build_regular((Fraction(-1, 2), Fraction(866, 1000)), 128))
    assert "certified_intersecting" in svg


def test_plot_random_parameters_parse():
    rng = Random(11)
    made = 0
    while made < 10:
        vals = [(Fraction(rng.randint(-60, 60), 10), Fraction(rng.randint(-60, 60), 10)) for _ in range(3)]
        try:
            svg = plot_circles(build_representation(Params(*vals), 128))
        except Exception:
            continue
        ET.fromstring(svg.encode())
        made += 1
