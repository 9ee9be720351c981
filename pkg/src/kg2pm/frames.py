"""Frame properties, their defining formulas, and model constructions.

* ``frame_report``: crispness of each relation, mono-relationality.
* ``crispness_countermodel`` / ``mono_countermodel``: valuations on a frame
  lacking the property that refute its defining formula.
* ``definability_suite``: sampled check of all defining formulas on a frame.
* ``star``: the crisp-model conflation swapping relations and flipping values.
* ``split``: the splitting construction, which preserves every formula value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .semantics import DESIGNATED, ONE, Evaluator, Model, TruthPair
from .syntax import Formula, iff, parse

CRISP_PLUS_FORMULA = parse("^[]p -> []^p")
CRISP_MINUS_FORMULA = parse("<>~~p -> ~~<>p")
MONO_FORMULA = iff(parse("[]p"), parse("!<>!p"))
FB_FORMULAS = (parse("~~[](p | ~p)"), parse("1 -< <>!(p | ~p)"))


class NotCrisp(ValueError):
    pass


class EdgeNotFractional(ValueError):
    pass


class EdgeNotDiffering(ValueError):
    pass


# ---------------------------------------------------------------- properties

@dataclass
class FramePropertyReport:
    crisp_plus: bool
    crisp_minus: bool
    mono_relational: bool
    finitely_branching: bool = True
    witnesses: dict = field(default_factory=dict)  # flag -> (w, u, value(s))


def _pairs(frame: Model):
    return [(w, u) for w in frame.worlds for u in frame.worlds]


def frame_report(frame: Model) -> FramePropertyReport:
    """Exact property flags, each false flag with its first witnessing edge."""
    witnesses = {}
    for name, sign in (("crisp_plus", "+"), ("crisp_minus", "-")):
        for w, u in _pairs(frame):
            r = frame.rel(sign, w, u)
            if 0 < r < 1:
                witnesses[name] = (w, u, r)
                break
    for w, u in _pairs(frame):
        a, b = frame.rel("+", w, u), frame.rel("-", w, u)
        if a != b:
            witnesses["mono_relational"] = (w, u, (a, b))
            break
    return FramePropertyReport(
        crisp_plus="crisp_plus" not in witnesses,
        crisp_minus="crisp_minus" not in witnesses,
        mono_relational="mono_relational" not in witnesses,
        witnesses=witnesses,
    )


# ---------------------------------------------------------------- countermodels

def _valuation(frame: Model, special, value, default) -> Model:
    v1, v2 = {}, {}
    for w in frame.worlds:
        x, y = value if w == special else default
        v1["p", w], v2["p", w] = x, y
    return frame.with_valuation(v1, v2)


def crispness_countermodel(frame: Model, sign: str, edge: Optional[tuple] = None):
    """``(model, w, formula)`` with ``formula`` not (1, 0) at ``w``.

    For ``+``: p is ``(x, 0)`` at the edge target, ``x`` the edge value, and
    ``(1, 0)`` elsewhere; the formula is ``^[]p -> []^p``.  For ``-``: p is
    ``(1, y)`` at the target; elsewhere ``(1, 0)`` when that already refutes
    ``<>~~p -> ~~<>p``, otherwise ``(1, 1)``, which always does.
    """
    if sign not in "+-" or len(sign) != 1:
        raise ValueError("sign must be '+' or '-'")
    w, u = _pick_edge(frame, edge, lambda a, b: 0 < frame.rel(sign, a, b) < 1,
                      EdgeNotFractional, f"no fractional R{sign} edge")
    r = frame.rel(sign, w, u)
    if sign == "+":
        m = _valuation(frame, u, (r, 0), (1, 0))
        return m, w, CRISP_PLUS_FORMULA
    for default in ((1, 0), (1, 1)):
        m = _valuation(frame, u, (1, r), default)
        if Evaluator(m)(CRISP_MINUS_FORMULA, w) != DESIGNATED:
            return m, w, CRISP_MINUS_FORMULA
    raise AssertionError("unreachable: the (1, 1) background always refutes")


def mono_countermodel(frame: Model, edge: Optional[tuple] = None):
    """``(model, w)`` refuting ``[]p <-> !<>!p`` at ``w``.

    With ``x, y`` the R+ and R- values of the edge, p is ``(min(x, y), 0)`` at
    its target and ``(1, 0)`` elsewhere: the smaller relation then sees p at
    full strength and the larger one does not.
    """
    w, u = _pick_edge(frame, edge, lambda a, b: frame.rel("+", a, b) != frame.rel("-", a, b),
                      EdgeNotDiffering, "R+ and R- agree")
    x, y = frame.rel("+", w, u), frame.rel("-", w, u)
    return _valuation(frame, u, (min(x, y), 0), (1, 0)), w


def _pick_edge(frame, edge, ok, error, message):
    if edge is None:
        for a, b in _pairs(frame):
            if ok(a, b):
                return a, b
        raise error(message)
    a, b = edge
    if a not in frame.worlds or b not in frame.worlds:
        raise error(f"edge {a},{b} refers to an unknown world")
    if not ok(a, b):
        raise error(f"{message} on edge {a},{b}")
    return a, b


# ---------------------------------------------------------------- sampling

@dataclass
class Violation:
    sample: int
    world: object
    value: TruthPair
    model: Model


@dataclass
class FormulaCheck:
    name: str
    formula: Formula
    property_holds: bool
    violations: list = field(default_factory=list)


@dataclass
class DefinabilityReport:
    seed: int
    samples: int
    properties: FramePropertyReport
    checks: list

    def consistent(self) -> bool:
        """No formula is violated on a frame that has its property."""
        return all(not c.violations for c in self.checks if c.property_holds)

    def text(self) -> str:
        lines = [f"seed {self.seed}", f"samples {self.samples}"]
        for c in self.checks:
            lines.append(f"{c.name}\t{c.formula}\tproperty={'yes' if c.property_holds else 'no'}"
                         f"\tviolations={len(c.violations)}")
            if c.violations:
                v = c.violations[0]
                lines.append(f"  first: sample {v.sample} world {v.world} value {v.value}")
        return "\n".join(lines) + "\n"


def random_valuation(frame: Model, rng: random.Random, max_denom: int = 6) -> Model:
    d = rng.randint(1, max_denom)
    v1 = {("p", w): Fraction(rng.randint(0, d), d) for w in frame.worlds}
    v2 = {("p", w): Fraction(rng.randint(0, d), d) for w in frame.worlds}
    return frame.with_valuation(v1, v2)


def definability_suite(frame: Model, samples: int, seed: int) -> DefinabilityReport:
    """Evaluate every defining formula at every world under seeded random valuations."""
    props = frame_report(frame)
    checks = [
        FormulaCheck("crisp_plus", CRISP_PLUS_FORMULA, props.crisp_plus),
        FormulaCheck("crisp_minus", CRISP_MINUS_FORMULA, props.crisp_minus),
        FormulaCheck("mono_relational", MONO_FORMULA, props.mono_relational),
        *(FormulaCheck("finitely_branching", f, True) for f in FB_FORMULAS),
    ]
    rng = random.Random(seed)
    for k in range(samples):
        m = random_valuation(frame, rng)
        ev = Evaluator(m)
        for c in checks:
            for w in frame.worlds:
                val = ev(c.formula, w)
                if val != DESIGNATED:
                    c.violations.append(Violation(k, w, val, m))
                    break
    return DefinabilityReport(seed, samples, props, checks)


def random_frame(rng: random.Random, *, max_worlds: int = 3, crisp: bool = False,
                 mono: bool = False, max_denom: int = 4, density: float = 0.5) -> Model:
    n = rng.randint(1, max_worlds)
    ws = [f"w{i}" for i in range(n)]

    def value():
        if crisp:
            return 1
        d = rng.randint(1, max_denom)
        return Fraction(rng.randint(1, d), d)

    rp = {(a, b): value() for a in ws for b in ws if rng.random() < density}
    rm = dict(rp) if mono else {(a, b): value() for a in ws for b in ws if rng.random() < density}
    return Model(ws, rp, rm)


# ---------------------------------------------------------------- star

def star(m: Model, atoms=None) -> Model:
    """Swap R+ and R-, and map each atom value (x, y) to (1 - y, 1 - x).

    ``atoms`` defaults to the atoms stored in ``m``; pass the atoms of the
    formulas of interest so that atoms valued (0, 0) everywhere flip too.
    """
    if not m.is_crisp():
        raise NotCrisp("star is defined on crisp models only")
    atoms = set(atoms or ()) | {a for a, _ in m.v1} | {a for a, _ in m.v2}
    v1 = {(a, w): ONE - m.val(2, a, w) for a in atoms for w in m.worlds}
    v2 = {(a, w): ONE - m.val(1, a, w) for a in atoms for w in m.worlds}
    return Model(m.worlds, dict(m.rminus), dict(m.rplus), v1, v2)


# ---------------------------------------------------------------- split

@dataclass(frozen=True)
class SplitLabel:
    """World of a split model: the edge ``source S target``, or an orphan when ``source`` is None."""

    sign: str
    source: Optional[str]
    target: str

    @property
    def name(self) -> str:
        return f"{self.source if self.source is not None else '@'}{self.sign}{self.target}"


def split(m: Model):
    """Splitting of ``m`` and the correspondence ``w -> [labels whose target is w]``.

    Worlds are the positive edges of both relations plus, per sign, an orphan
    label for every world without a predecessor under that relation.  A label
    with target ``u`` reaches each edge label ``u S u2`` with value ``u S u2``
    under the split copy of ``S``, and carries ``u``'s valuation.
    """
    labels = []
    for sign in "+-":
        table = m.rplus if sign == "+" else m.rminus
        has_pred = {u for (_, u) in table}
        for w in m.worlds:
            for u in m.worlds:
                if table.get((w, u)):
                    labels.append(SplitLabel(sign, w, u))
        for u in m.worlds:
            if u not in has_pred:
                labels.append(SplitLabel(sign, None, u))
    names = [lab.name for lab in labels]
    rp, rm, v1, v2 = {}, {}, {}, {}
    for x in labels:
        for y in labels:
            if y.source is not None and y.source == x.target:
                (rp if y.sign == "+" else rm)[x.name, y.name] = m.rel(y.sign, y.source, y.target)
        for (atom, w), val in m.v1.items():
            if w == x.target:
                v1[atom, x.name] = val
        for (atom, w), val in m.v2.items():
            if w == x.target:
                v2[atom, x.name] = val
    corr = {w: [lab.name for lab in labels if lab.target == w] for w in m.worlds}
    return Model(names, rp, rm, v1, v2), corr
