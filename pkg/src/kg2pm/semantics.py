"""Exact bi-Gödel algebra on [0, 1] and evaluation on bi-relational models.

Values are :class:`fractions.Fraction` throughout; no floating point is ever
involved.  A model is finite, so the modal infima and suprema are minima and
maxima over the world set (absent relation values count as 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

from .syntax import (
    And, Atom, Bot, Box, Coimpl, Delta, Dia, Formula, GNeg, Impl, Neg, Or, Top,
    as_formula,
)

ZERO = Fraction(0)
ONE = Fraction(1)


class UnknownWorld(KeyError):
    pass


# ---------------------------------------------------------------- algebra

def g_and(a, b):
    return min(a, b)


def g_or(a, b):
    return max(a, b)


def g_impl(a, b):
    """Gödel residuum: 1 if a <= b else b."""
    return ONE if a <= b else b


def g_coimpl(a, b):
    """Co-residuum: 0 if a <= b else a."""
    return ZERO if a <= b else a


def g_neg(a):
    return ZERO if a > 0 else ONE


def g_delta(a):
    return ZERO if a < 1 else ONE


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"n"``/``"n/d"`` strings; rejects floats."""
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'n/d'")
    v = Fraction(x)
    if not 0 <= v <= 1:
        raise ValueError(f"value {x!r} outside [0, 1]")
    return v


class TruthPair(NamedTuple):
    """Support of truth and support of falsity."""

    pos: Fraction
    neg: Fraction

    def __str__(self) -> str:
        return f"({self.pos}, {self.neg})"


DESIGNATED = TruthPair(ONE, ZERO)


# ---------------------------------------------------------------- models

@dataclass
class Model:
    """Finite bi-relational model.

    ``rplus``/``rminus`` map ``(w, w')`` pairs and ``v1``/``v2`` map
    ``(atom, w)`` pairs to values in [0, 1]; missing keys mean 0.  A frame is a
    model whose valuations are empty.
    """

    worlds: tuple = ()
    rplus: dict = field(default_factory=dict)
    rminus: dict = field(default_factory=dict)
    v1: dict = field(default_factory=dict)
    v2: dict = field(default_factory=dict)

    def __post_init__(self):
        self.worlds = tuple(self.worlds)
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("duplicate world labels")
        ws = set(self.worlds)
        for name in ("rplus", "rminus", "v1", "v2"):
            table = {}
            for key, val in getattr(self, name).items():
                val = to_fraction(val)
                if name.startswith("r"):
                    if key[0] not in ws or key[1] not in ws:
                        raise UnknownWorld(key)
                elif key[1] not in ws:
                    raise UnknownWorld(key)
                if val:
                    table[tuple(key)] = val
            setattr(self, name, table)

    # -- accessors
    def rel(self, sign: str, w, u) -> Fraction:
        table = self.rplus if sign == "+" else self.rminus
        return table.get((w, u), ZERO)

    def val(self, side: int, atom: str, w) -> Fraction:
        table = self.v1 if side == 1 else self.v2
        return table.get((atom, w), ZERO)

    def successors(self, sign: str, w) -> list:
        table = self.rplus if sign == "+" else self.rminus
        return [u for u in self.worlds if table.get((w, u), ZERO) > 0]

    # -- frame predicates
    def is_crisp(self) -> bool:
        return all(v == 1 for v in self.rplus.values()) and all(v == 1 for v in self.rminus.values())

    def is_mono_relational(self) -> bool:
        return self.rplus == self.rminus

    def frame(self) -> "Model":
        return Model(self.worlds, dict(self.rplus), dict(self.rminus))

    def with_valuation(self, v1: Mapping, v2: Mapping) -> "Model":
        return Model(self.worlds, dict(self.rplus), dict(self.rminus), dict(v1), dict(v2))

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return (self.worlds == other.worlds and self.rplus == other.rplus
                and self.rminus == other.rminus and self.v1 == other.v1 and self.v2 == other.v2)


Frame = Model


# ---------------------------------------------------------------- evaluation

class Evaluator:
    """Memoising evaluator for one model.

    Evaluating many formulas on the same model (the definability suites, the
    extraction self-check) reuses subformula values across calls.
    """

    def __init__(self, model: Model):
        self.model = model
        self._ws = set(model.worlds)
        self._succ = {
            (s, w): [(u, model.rel(s, w, u)) for u in model.successors(s, w)]
            for s in "+-" for w in model.worlds
        }
        self._cache: dict = {}

    def __call__(self, f, w) -> TruthPair:
        """Value of ``f`` (a formula or its text) at ``w``."""
        if w not in self._ws:
            raise UnknownWorld(w)
        return self._eval(as_formula(f), w)

    def _eval(self, f: Formula, w) -> TruthPair:
        key = (f, w)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        res = self._compute(f, w)
        self._cache[key] = res
        return res

    def _compute(self, f: Formula, w) -> TruthPair:
        m = self.model
        ev = self._eval
        if isinstance(f, Atom):
            return TruthPair(m.val(1, f.name, w), m.val(2, f.name, w))
        if isinstance(f, Top):
            return TruthPair(ONE, ZERO)
        if isinstance(f, Bot):
            return TruthPair(ZERO, ONE)
        if isinstance(f, Neg):
            a = ev(f.arg, w)
            return TruthPair(a.neg, a.pos)
        if isinstance(f, And):
            a, b = ev(f.left, w), ev(f.right, w)
            return TruthPair(min(a.pos, b.pos), max(a.neg, b.neg))
        if isinstance(f, Or):
            a, b = ev(f.left, w), ev(f.right, w)
            return TruthPair(max(a.pos, b.pos), min(a.neg, b.neg))
        if isinstance(f, Impl):
            a, b = ev(f.left, w), ev(f.right, w)
            return TruthPair(g_impl(a.pos, b.pos), g_coimpl(b.neg, a.neg))
        if isinstance(f, Coimpl):
            a, b = ev(f.left, w), ev(f.right, w)
            return TruthPair(g_coimpl(a.pos, b.pos), g_impl(b.neg, a.neg))
        if isinstance(f, GNeg):
            a = ev(f.arg, w)
            return TruthPair(g_neg(a.pos), g_coimpl(ONE, a.neg))
        if isinstance(f, Delta):
            a = ev(f.arg, w)
            return TruthPair(g_delta(a.pos), g_neg(g_neg(a.neg)))
        if isinstance(f, Box):
            pos = min((g_impl(r, ev(f.arg, u).pos) for u, r in self._succ["+", w]), default=ONE)
            neg = max((min(r, ev(f.arg, u).neg) for u, r in self._succ["-", w]), default=ZERO)
            return TruthPair(pos, neg)
        if isinstance(f, Dia):
            pos = max((min(r, ev(f.arg, u).pos) for u, r in self._succ["+", w]), default=ZERO)
            # infimum reading for the falsity support of the diamond
            neg = min((g_impl(r, ev(f.arg, u).neg) for u, r in self._succ["-", w]), default=ONE)
            return TruthPair(pos, neg)
        raise TypeError(f"not a formula: {f!r}")


def evaluate(model: Model, w, f) -> TruthPair:
    """Value pair (v1, v2) of ``f`` at world ``w``."""
    return Evaluator(model)(as_formula(f), w)


@dataclass
class ModelCheck:
    holds: bool
    world: object = None
    value: Optional[TruthPair] = None

    def __bool__(self):
        return self.holds


def check_valid_on_model(model: Model, f) -> ModelCheck:
    """Whether ``f`` takes value (1, 0) at every world; reports the first failure."""
    f = as_formula(f)
    ev = Evaluator(model)
    for w in model.worlds:
        v = ev(f, w)
        if v != DESIGNATED:
            return ModelCheck(False, w, v)
    return ModelCheck(True)


def model_depth(model: Model, root) -> int:
    """Longest relational path (either relation) from ``root``; models are expected acyclic."""
    depth = {root: 0}
    frontier = [root]
    best = 0
    while frontier:
        nxt = []
        for w in frontier:
            for u in set(model.successors("+", w)) | set(model.successors("-", w)):
                d = depth[w] + 1
                if d > depth.get(u, -1):
                    if d > len(model.worlds):
                        raise ValueError("model has a cycle reachable from the root")
                    depth[u] = d
                    best = max(best, d)
                    nxt.append(u)
        frontier = nxt
    return best


def values_of(model: Model) -> set:
    """All relation and atom values stored in ``model`` (zeros omitted)."""
    out: set = set()
    for t in (model.rplus, model.rminus, model.v1, model.v2):
        out.update(t.values())
    return out


def common_denominator(values: Iterable[Fraction]) -> int:
    from math import lcm

    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d
