"""Formula reductions and the classical-K side of the hardness transforms.

* ``sat_falsif_reduce``: the double-Gödel-negation reductions between
  satisfiability and falsifiability, plus ``complement``, a formula that is
  designated exactly where its argument is not (an exact reduction in both
  directions for the (1, 0) reading of satisfiability).
* ``nabla_transform`` / ``triangle_transform``: embeddings of classical modal
  formulas over ``{0, &, |, ->, [], <>}``.
* ``ClassicalModel``, ``k_eval`` and a bounded countermodel search, used as
  the reference the transforms are checked against.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .oracle import DEFAULT_BUDGET, BudgetExceeded
from .semantics import Model
from .syntax import (
    BOT, TOP, And, Atom, Bot, Box, Coimpl, Delta, Dia, Formula, GNeg, Impl, Neg,
    Or, Top, as_formula, atoms,
)

SAT_TO_FALSIF = "sat2fal"
FALSIF_TO_SAT = "fal2sat"
POSITIVE_SIDE = "positive"
NEGATIVE_SIDE = "negative"


class IllegalConnective(ValueError):
    """The formula leaves the classical fragment ``{0, &, |, ->, [], <>}``."""


# ---------------------------------------------------------------- sat / falsif

def sat_falsif_reduce(f, mode: str) -> Formula:
    """``~~(f -< 0)`` for sat2fal, ``~~(1 -< f)`` for fal2sat."""
    f = as_formula(f)
    if mode == SAT_TO_FALSIF:
        return GNeg(GNeg(Coimpl(f, BOT)))
    if mode == FALSIF_TO_SAT:
        return GNeg(GNeg(Coimpl(TOP, f)))
    raise ValueError(f"unknown mode {mode!r}")


def designation_test(f) -> Formula:
    """``^(f & ~!f)``: value (1, 0) where ``f`` is (1, 0), and (0, 1) elsewhere."""
    f = as_formula(f)
    return Delta(And(f, GNeg(Neg(f))))


def complement(f) -> Formula:
    """``~^(f & ~!f)``: designated exactly at the worlds where ``f`` is not.

    So ``f`` is satisfiable iff ``complement(f)`` is falsifiable, and ``f`` is
    falsifiable iff ``complement(f)`` is satisfiable.
    """
    return GNeg(designation_test(f))


# ---------------------------------------------------------------- classical fragment

_CLASSICAL = (Atom, Bot, And, Or, Impl, Box, Dia)


def check_classical(f: Formula) -> None:
    if not isinstance(f, _CLASSICAL):
        raise IllegalConnective(f"{type(f).__name__} is outside the classical fragment")
    for attr in ("arg", "left", "right"):
        sub = getattr(f, attr, None)
        if sub is not None:
            check_classical(sub)


def nabla_transform(f) -> Formula:
    """Prefix every subformula occurrence, the root included, with ``~~``."""
    f = as_formula(f)
    check_classical(f)
    return _nabla(f)


def _nabla(f: Formula) -> Formula:
    if isinstance(f, (Atom, Bot)):
        inner = f
    elif isinstance(f, (Box, Dia)):
        inner = type(f)(_nabla(f.arg))
    else:
        inner = type(f)(_nabla(f.left), _nabla(f.right))
    return GNeg(GNeg(inner))


def triangle_transform(f) -> Formula:
    """Dualise: atoms get ``^``, ``&``/``|`` and ``[]``/``<>`` swap, ``a -> b`` becomes ``b' -< a'``.

    The constant 0 maps to 1, the only constant whose falsity support is 0.
    """
    f = as_formula(f)
    check_classical(f)
    return _triangle(f)


def _triangle(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return Delta(f)
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, And):
        return Or(_triangle(f.left), _triangle(f.right))
    if isinstance(f, Or):
        return And(_triangle(f.left), _triangle(f.right))
    if isinstance(f, Impl):
        return Coimpl(_triangle(f.right), _triangle(f.left))
    if isinstance(f, Box):
        return Dia(_triangle(f.arg))
    return Box(_triangle(f.arg))


# ---------------------------------------------------------------- classical K

@dataclass
class ClassicalModel:
    worlds: tuple = ()
    rel: frozenset = frozenset()
    val: dict = field(default_factory=dict)  # (atom, world) -> bool, absent = False

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        ws = set(self.worlds)
        self.rel = frozenset(tuple(e) for e in self.rel)
        if any(a not in ws or b not in ws for a, b in self.rel):
            raise ValueError("relation refers to an unknown world")
        self.val = {k: bool(v) for k, v in self.val.items() if v}
        if any(w not in ws for _, w in self.val):
            raise ValueError("valuation refers to an unknown world")

    def successors(self, w) -> list:
        return [u for u in self.worlds if (w, u) in self.rel]


def k_eval(m: ClassicalModel, w, f) -> bool:
    """Classical Kripke satisfaction; 0 is falsum."""
    f = as_formula(f)
    if isinstance(f, Atom):
        return m.val.get((f.name, w), False)
    if isinstance(f, Bot):
        return False
    if isinstance(f, Top):
        return True
    if isinstance(f, And):
        return k_eval(m, w, f.left) and k_eval(m, w, f.right)
    if isinstance(f, Or):
        return k_eval(m, w, f.left) or k_eval(m, w, f.right)
    if isinstance(f, Impl):
        return (not k_eval(m, w, f.left)) or k_eval(m, w, f.right)
    if isinstance(f, Box):
        return all(k_eval(m, u, f.arg) for u in m.successors(w))
    if isinstance(f, Dia):
        return any(k_eval(m, u, f.arg) for u in m.successors(w))
    raise IllegalConnective(f"{type(f).__name__} has no classical reading here")


@dataclass
class KValidWithin:
    searched: int = 0

    def __bool__(self):
        return True


@dataclass
class KCounter:
    model: ClassicalModel
    world: str = "w0"

    def __bool__(self):
        return False


def k_countermodel_search(f, max_worlds: int, *, budget: int = DEFAULT_BUDGET):
    """First classical model (fewest worlds, then lexicographic) refuting ``f`` at ``w0``."""
    f = as_formula(f)
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    names = atoms(f)
    searched = 0
    for n in range(1, max_worlds + 1):
        ws = [f"w{i}" for i in range(n)]
        pairs = [(a, b) for a in ws for b in ws]
        slots = [(p, w) for w in ws for p in names]
        searched += 2 ** (len(pairs) + len(slots))
        if searched > budget:
            raise BudgetExceeded(searched, budget)
        for rbits in itertools.product((False, True), repeat=len(pairs)):
            rel = frozenset(e for e, bit in zip(pairs, rbits) if bit)
            for vbits in itertools.product((False, True), repeat=len(slots)):
                m = ClassicalModel(ws, rel, {s: True for s, bit in zip(slots, vbits) if bit})
                if not k_eval(m, "w0", f):
                    return KCounter(m, "w0")
    return KValidWithin(searched)


def embed_classical(m: ClassicalModel, target: str = POSITIVE_SIDE) -> Model:
    """Crisp model with ``R+ = R- = rel`` and ``v1 = v2`` the characteristic valuation.

    ``target`` names the side the embedding is read on; the model is the same
    for both because both sides are set to match.
    """
    if target not in (POSITIVE_SIDE, NEGATIVE_SIDE):
        raise ValueError(f"unknown target {target!r}")
    rel = {e: 1 for e in m.rel}
    val = {k: 1 for k, v in m.val.items() if v}
    return Model(m.worlds, rel, dict(rel), val, dict(val))


# ---------------------------------------------------------------- file format

def classical_to_doc(m: ClassicalModel) -> dict:
    order = {w: i for i, w in enumerate(m.worlds)}
    rel = sorted(m.rel, key=lambda e: (order[e[0]], order[e[1]]))
    val: dict = {}
    for atom in sorted({a for a, _ in m.val}):
        row = {w: "1" for w in m.worlds if m.val.get((atom, w))}
        if row:
            val[atom] = row
    return {"worlds": list(m.worlds), "rel": [[a, b, "1"] for a, b in rel], "val": val}


def doc_to_classical(doc) -> ClassicalModel:
    from .modelio import MalformedDocument

    if not isinstance(doc, dict) or not isinstance(doc.get("worlds"), list) or not doc["worlds"]:
        raise MalformedDocument("classical model needs a non-empty 'worlds' list")
    try:
        rel = set()
        for item in doc.get("rel", []):
            a, b, v = item
            if v not in ("0", "1"):
                raise MalformedDocument(f"classical values are '0' or '1', got {v!r}")
            if v == "1":
                rel.add((a, b))
        val = {}
        for atom, row in doc.get("val", {}).items():
            for w, v in row.items():
                if v not in ("0", "1"):
                    raise MalformedDocument(f"classical values are '0' or '1', got {v!r}")
                val[atom, w] = v == "1"
        return ClassicalModel(doc["worlds"], rel, val)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, MalformedDocument):
            raise
        raise MalformedDocument(str(exc)) from exc


def load_classical(path) -> ClassicalModel:
    from .modelio import MalformedDocument

    try:
        with open(path, encoding="utf-8") as fh:
            return doc_to_classical(json.load(fh))
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc
