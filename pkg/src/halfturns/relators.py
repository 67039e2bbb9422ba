"""Words in the half-turn generators and numerical relator checks.

Each generator is a line matrix M with M^2 = -I, so M^-1 = -M. In PSL(2, C)
every generator is an involution; words are evaluated in the SL lift and a
relator holds when the product is +I or -I.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product

from .balls import DEFAULT_PRECISION_CAP, working_precision
from .errors import PrecisionExhausted
from .rep import HalfTurnTriple, Mat2, Params, build_regular, build_representation

GENERATORS = ("a", "b", "c")
FORMAL = ("x", "y", "z")

HOLDS = "holds"
FAILS = "fails"
UNDECIDED = "undecided"

RELATOR_PRECISION = 256
RADIUS_THRESHOLD = 1e-30

_TOKEN = re.compile(r"^([a-z])(\^-1)?$")


@dataclass(frozen=True)
class GroupWord:
    """A word as (letter, exponent) pairs, exponent +1 or -1."""

    letters: tuple[tuple[str, int], ...]

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return " ".join(g if e == 1 else f"{g}^-1" for g, e in self.letters)

    def __add__(self, other: GroupWord) -> GroupWord:
        return GroupWord(self.letters + other.letters)

    def compact(self) -> str:
        return "".join(g if e == 1 else g + "'" for g, e in self.letters)

    def substitute(self, mapping: dict[str, str]) -> GroupWord:
        return GroupWord(tuple((mapping.get(g, g), e) for g, e in self.letters))

    def rotations(self) -> list[GroupWord]:
        n = len(self.letters)
        return [GroupWord(self.letters[i:] + self.letters[:i]) for i in range(n)]

    def psl_reduced(self) -> GroupWord:
        """Drop inverse marks (generators are involutions) and cancel adjacent repeats."""
        out: list[tuple[str, int]] = []
        for g, _ in self.letters:
            if out and out[-1][0] == g:
                out.pop()
            else:
                out.append((g, 1))
        return GroupWord(tuple(out))

    def alphabet(self) -> set[str]:
        return {g for g, _ in self.letters}


def parse_word(text: str, alphabet=GENERATORS) -> GroupWord:
    """Whitespace-separated letters with optional ``^-1``, e.g. ``c^-1 b^-1 a^-1 b c a``."""
    tokens = text.split()
    if not tokens:
        raise ValueError("empty word")
    out = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if not m or m.group(1) not in alphabet:
            raise ValueError(f"bad token {tok!r}; expected one of {', '.join(alphabet)} with optional ^-1")
        out.append((m.group(1), -1 if m.group(2) else 1))
    return GroupWord(tuple(out))


def parse_template(text: str) -> GroupWord:
    """Template in the formal letters x, y, z; a, b, c stand for themselves."""
    return parse_word(text, FORMAL + GENERATORS)


def evaluate_word(word: GroupWord, t: HalfTurnTriple) -> Mat2:
    mats = dict(zip(GENERATORS, t.matrices))
    with working_precision(t.precision):
        out = Mat2.identity()
        for g, e in word.letters:
            if g not in mats:
                raise ValueError(f"letter {g!r} is not a generator")
            m = mats[g]
            out = out @ (m if e == 1 else -m)
    return out


@dataclass(frozen=True)
class RelatorResult:
    status: str
    sign: int | None  # +1 or -1 when the word evaluates to +-I
    radius: float
    precision: int

    def as_dict(self) -> dict:
        return {"status": self.status, "sign": self.sign, "radius": self.radius, "precision_bits": self.precision}


def _classify(m: Mat2, threshold: float) -> tuple[str, int | None]:
    e11, e12, e21, e22 = m.entries()
    excluded = 0
    for s in (1, -1):
        diffs = (e11 - s, e12, e21, e22 - s)
        if all(d.contains(0) for d in diffs):
            if m.max_radius() < threshold:
                return HOLDS, s
        elif any(not d.contains(0) for d in diffs):
            excluded += 1
    return (FAILS, None) if excluded == 2 else (UNDECIDED, None)


def is_relator(
    word: GroupWord,
    t: HalfTurnTriple,
    precision: int = RELATOR_PRECISION,
    threshold: float = RADIUS_THRESHOLD,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> RelatorResult:
    """``holds`` means +-I lies in the product ball and the ball radius is below ``threshold``.

    This is a numerical verification, not a proof. ``fails`` is certified.
    """
    bits = precision
    while True:
        tt = t if t.precision == bits else t.rebuild(bits)
        m = evaluate_word(word, tt)
        status, sign = _classify(m, threshold)
        if status != UNDECIDED:
            return RelatorResult(status, sign, m.max_radius(), bits)
        if bits >= precision_cap or not t.params.refinable():
            raise PrecisionExhausted(f"relator {word} undecided at {bits} bits")
        bits = min(2 * bits, precision_cap)


def word_order(
    word: GroupWord, t: HalfTurnTriple, max_order: int = 12, precision: int = RELATOR_PRECISION
) -> int | None:
    """Smallest n <= max_order with word^n = +-I, or None."""
    for n in range(1, max_order + 1):
        if is_relator(GroupWord(word.letters * n), t, precision).status == HOLDS:
            return n
    return None


def cyclic_substitutions(template: GroupWord) -> list[tuple[str, GroupWord]]:
    """w(a, b, c), w(b, c, a), w(c, a, b)."""
    out = []
    for names in (("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")):
        out.append((f"w({', '.join(names)})", template.substitute(dict(zip(FORMAL, names)))))
    return out


@dataclass(frozen=True)
class Presentation:
    name: str
    template: GroupWord
    k: int
    d: int  # rho = k/2 + sqrt(-d)/2
    expected_field: str
    note: str = ""

    @property
    def rho(self):
        from .candidates import QuadraticCandidate

        return QuadraticCandidate(self.k, self.d).rho

    @property
    def rho_text(self) -> str:
        from .candidates import format_rho

        return format_rho(self.k, self.d)

    def relators(self) -> list[tuple[str, GroupWord]]:
        squares = [(f"{g}^2", GroupWord(((g, 1), (g, 1)))) for g in GENERATORS]
        return squares + cyclic_substitutions(self.template)


PRESENTATIONS: dict[str, Presentation] = {
    "rho-3-trailing-a": Presentation(
        "rho-3-trailing-a",
        parse_template("z^-1 y^-1 x^-1 y z a"),
        -3,
        3,
        "Q(√-3)",
        "trailing letter read as the generator a in every substitution",
    ),
    "rho-3-trailing-x": Presentation(
        "rho-3-trailing-x",
        parse_template("z^-1 y^-1 x^-1 y z x"),
        -3,
        3,
        "Q(√-3)",
        "trailing letter read as the formal letter x",
    ),
    "rho-1": Presentation("rho-1", parse_template("x^-1 y^-1 z y"), -1, 3, "Q(√-3)"),
    "rho+1": Presentation("rho+1", parse_template("y^-1 x^-1 y z^-1 y^-1 z x^-1 z^-1 x"), 1, 3, "Q(√-3)"),
}


@dataclass(frozen=True)
class Convention:
    """Lift signs for (rho0, rho1, rho2) and an optional complex conjugation.

    Flipping the sign of one generator's lift flips two parameters, so the
    eight sign patterns cover every lift of the three half-turns.
    """

    signs: tuple[int, int, int] = (1, 1, 1)
    conjugate: bool = False

    def label(self) -> str:
        s = "".join("+" if x > 0 else "-" for x in self.signs)
        return s + (" conj" if self.conjugate else "")


CONVENTIONS = tuple(Convention(sg, cj) for cj in (False, True) for sg in product((1, -1), repeat=3))


@dataclass(frozen=True)
class PresentationCheck:
    presentation: Presentation
    results: tuple[tuple[str, str, RelatorResult], ...]  # (label, word, result)
    convention: Convention = Convention()
    orders: tuple[tuple[str, int | None], ...] = ()  # order of each w(...) in PSL, when finite

    @property
    def all_hold(self) -> bool:
        return all(r.status == HOLDS for _, _, r in self.results)

    def as_dict(self) -> dict:
        p = self.presentation
        return {
            "presentation": p.name,
            "template": str(p.template),
            "rho": p.rho_text,
            "expected_field": p.expected_field,
            "note": p.note,
            "convention": self.convention.label(),
            "relators": [{"label": lbl, "word": w, **r.as_dict()} for lbl, w, r in self.results],
            "all_hold": self.all_hold,
            "word_orders": {lbl: n for lbl, n in self.orders},
            "verification": "numerical (ball arithmetic), not a proof",
        }


def triple_for(pres: Presentation, convention: Convention = Convention(), precision: int = RELATOR_PRECISION):
    rho = pres.rho
    if convention.signs == (1, 1, 1) and not convention.conjugate:
        return build_regular(rho, precision)
    p = Params(*(s * rho for s in convention.signs))
    if convention.conjugate:
        p = p.conjugate()
    return build_representation(p, precision)


def verify_presentation(
    pres: Presentation, precision: int = RELATOR_PRECISION, convention: Convention = Convention()
) -> PresentationCheck:
    t = triple_for(pres, convention, precision)
    results = []
    for label, word in pres.relators():
        results.append((label, str(word), is_relator(word, t, precision)))
    orders = tuple((label, word_order(word, t, precision=precision)) for label, word in cyclic_substitutions(pres.template))
    return PresentationCheck(pres, tuple(results), convention, orders)


def verify_all_conventions(pres: Presentation, precision: int = RELATOR_PRECISION) -> list[PresentationCheck]:
    return [verify_presentation(pres, precision, c) for c in CONVENTIONS]


def _reduced_words(max_length: int):
    """Words over a, b, c with no letter repeated twice in a row, by increasing length."""
    layer = [(g,) for g in GENERATORS]
    yield from layer
    for _ in range(max_length - 1):
        layer = [w + (g,) for w in layer for g in GENERATORS if g != w[-1]]
        yield from layer


def search_short_relators(
    t: HalfTurnTriple,
    max_length: int,
    precision: int = RELATOR_PRECISION,
    threshold: float = RADIUS_THRESHOLD,
) -> list[GroupWord]:
    """Breadth-first search for relators among PSL-reduced words.

    Returns aa, bb, cc and every cyclically reduced word (first letter differs
    from the last) of length <= max_length evaluating to +-I. Products are
    built incrementally from prefixes; undecided words are left out.
    """
    if max_length > 12:
        raise ValueError("max_length is capped at 12")
    if max_length < 1:
        return []
    tt = t if t.precision == precision else t.rebuild(precision)
    mats = dict(zip(GENERATORS, tt.matrices))
    found = [GroupWord(((g, 1), (g, 1))) for g in GENERATORS] if max_length >= 2 else []
    with working_precision(precision):
        prods = {(g,): mats[g] for g in GENERATORS}
        frontier = list(prods)
        for _ in range(max_length - 1):
            nxt = {}
            for w in frontier:
                for g in GENERATORS:
                    if g == w[-1]:
                        continue
                    m = prods[w] @ mats[g]
                    nw = w + (g,)
                    nxt[nw] = m
                    if nw[0] != nw[-1] and _classify(m, threshold)[0] == HOLDS:
                        found.append(GroupWord(tuple((x, 1) for x in nw)))
            prods, frontier = nxt, list(nxt)
    return found
