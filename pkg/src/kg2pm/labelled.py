"""Labelled-value solver: exact values on a finite grid, one world at a time.

Entries are labels ``w:i:psi = v`` with ``v`` drawn from ``{0, 1/d, ..., 1}``
(stored as numerators over ``d``).  At each world the solver picks values for
every relevant (side, subformula) label by backtracking with arc consistency;
a label forced to two different values ends up with an empty domain, which is
the branch-closing condition.  Modal labels are then discharged by
successors: each label that needs a witness gets its own successor, and every
successor over the same relation must also respect the universal conditions
of all modal labels of that relation.  Successors are solved one at a time
and their entries dropped once solved, so the live entries are those of the
worlds on the current path.

For a witness the relation value is chosen as small as the witness condition
allows: every universal condition is monotone in the relation value, so a
smaller value is never worse.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .semantics import DESIGNATED, Evaluator, Model
from .syntax import (
    And, Atom, Bot, Box, Coimpl, Delta, Dia, Formula, GNeg, Impl, Neg, Or, Top,
    as_formula, subformulas,
)
from .tableau import InternalError, LimitExceeded, Limits

DEFAULT_LIMITS = Limits(max_states=200_000, max_constraints=100_000, time_budget=60.0)

_KIND = {Atom: "atom", Top: "top", Bot: "bot", Neg: "neg", GNeg: "gneg", Delta: "delta",
         Box: "box", Dia: "dia", And: "and", Or: "or", Impl: "impl", Coimpl: "coimpl"}


@dataclass
class SatInGrid:
    model: Model
    world: str = "w0"
    peak_live: int = 0
    states: int = 0

    def __bool__(self):
        return True


@dataclass
class NoModelInGrid:
    peak_live: int = 0
    states: int = 0

    def __bool__(self):
        return False


@dataclass
class _World:
    """A solved world: its labels and its successor edges ``(sign, r, world)``."""

    labels: dict
    edges: list = field(default_factory=list)


class _Solver:
    def __init__(self, f: Formula, d: int, limits: Limits):
        self.d = d
        self.limits = limits
        self.formulas = subformulas(f)
        idx = {g: i for i, g in enumerate(self.formulas)}
        self.root = idx[f]
        self.kind = [_KIND[type(g)] for g in self.formulas]
        self.kids = []
        for g in self.formulas:
            if isinstance(g, (Neg, GNeg, Delta, Box, Dia)):
                self.kids.append((idx[g.arg],))
            elif isinstance(g, (And, Or, Impl, Coimpl)):
                self.kids.append((idx[g.left], idx[g.right]))
            else:
                self.kids.append(())
        self.full = frozenset(range(d + 1))
        self.live = 0
        self.peak = 0
        self.states = 0
        self.failed: set = set()
        self.start = time.monotonic()

    # -- local algebra over numerators
    def op(self, kind: str, side: int, args) -> int:
        d = self.d
        if kind == "neg":
            return args[0]
        if kind in ("and", "or"):
            low = (kind == "and") == (side == 1)
            return min(args) if low else max(args)
        if kind in ("impl", "coimpl"):
            a, b = args
            if (kind == "impl") == (side == 1):
                return d if a <= b else b
            return 0 if a <= b else a
        (a,) = args
        if kind == "gneg":
            if side == 1:
                return d if a == 0 else 0
            return d if a < d else 0
        if kind == "delta":
            if side == 1:
                return d if a == d else 0
            return d if a > 0 else 0
        raise ValueError(kind)

    def children(self, side: int, node: int) -> tuple:
        """Labels that ``(side, node)`` is computed from, in operand order."""
        kind = self.kind[node]
        k = self.kids[node]
        if kind == "neg":
            return ((3 - side, k[0]),)
        if kind in ("and", "or"):
            return ((side, k[0]), (side, k[1]))
        if kind in ("impl", "coimpl"):
            # side 2 of both reads (right, left): v2 of impl is right -< left
            return ((1, k[0]), (1, k[1])) if side == 1 else ((2, k[1]), (2, k[0]))
        if kind in ("gneg", "delta"):
            return ((side, k[0]),)
        return ()

    def _tick(self) -> None:
        self.states += 1
        if self.states > self.limits.max_states:
            raise LimitExceeded("states", self.limits.max_states, "labelled")
        if time.monotonic() - self.start > self.limits.time_budget:
            raise LimitExceeded("time", self.limits.time_budget, "labelled")

    # -- one world
    def solve(self, reqs: dict):
        """A solved world meeting ``reqs`` (label -> allowed values), or None."""
        key = frozenset(reqs.items())
        if key in self.failed:
            return None
        labels = self._closure(reqs)
        domains = {}
        for lab in labels:
            kind = self.kind[lab[1]]
            if kind == "top":
                dom = frozenset({self.d if lab[0] == 1 else 0})
            elif kind == "bot":
                dom = frozenset({0 if lab[0] == 1 else self.d})
            else:
                dom = self.full
            domains[lab] = dom & reqs.get(lab, self.full)
        size = len(labels) + 1
        self.live += size
        self.peak = max(self.peak, self.live)
        try:
            for sol in self._assignments(domains):
                world = self._discharge(sol)
                if world is not None:
                    return world
        finally:
            self.live -= size
        self.failed.add(key)
        return None

    def _closure(self, reqs) -> list:
        seen: dict = {}
        stack = list(reqs)
        while stack:
            lab = stack.pop()
            if lab in seen:
                continue
            seen[lab] = None
            stack.extend(self.children(*lab))
        return list(seen)

    def _propagate(self, domains: dict) -> bool:
        if not all(domains.values()):
            return False
        composite = [lab for lab in domains if self.children(*lab)]
        changed = True
        while changed:
            changed = False
            for lab in composite:
                kind = self.kind[lab[1]]
                ch = self.children(*lab)
                target = domains[lab]
                support = [set() for _ in ch]
                reach = set()
                for args in itertools.product(*(sorted(domains[c]) for c in ch)):
                    v = self.op(kind, lab[0], args)
                    if v in target:
                        reach.add(v)
                        for i, a in enumerate(args):
                            support[i].add(a)
                if not reach:
                    return False
                if reach != target:
                    domains[lab] = frozenset(reach)
                    changed = True
                narrowed: dict = {}
                for c, sup in zip(ch, support):  # a repeated operand keeps the intersection
                    narrowed[c] = narrowed.get(c, domains[c]) & sup
                for c, dom in narrowed.items():
                    if dom != domains[c]:
                        domains[c] = frozenset(dom)
                        changed = True
        return True

    def _assignments(self, domains: dict):
        """All consistent single-valued assignments, smallest domain first."""
        self._tick()
        domains = dict(domains)
        if not self._propagate(domains):
            return
        open_ = [lab for lab, dom in domains.items() if len(dom) > 1]
        if not open_:
            sol = {lab: next(iter(dom)) for lab, dom in domains.items()}
            if all(sol[lab] == self.op(self.kind[lab[1]], lab[0], [sol[c] for c in self.children(*lab)])
                   for lab in sol if self.children(*lab)):
                yield sol
            return
        lab = min(open_, key=lambda x: (len(domains[x]), x))
        for v in sorted(domains[lab]):
            child = dict(domains)
            child[lab] = frozenset({v})
            yield from self._assignments(child)

    # -- successors
    def _discharge(self, sol: dict):
        world = _World(sol)
        d = self.d
        for side, sign in ((1, "+"), (2, "-")):
            modal = [(lab, sol[lab]) for lab in sol
                     if lab[0] == side and self.kind[lab[1]] in ("box", "dia")]
            for (s, node), val in modal:
                kind = self.kind[node]
                arg = (side, self.kids[node][0])
                if side == 1 and kind == "box" and val < d:
                    r, need = val + 1, {val}
                elif side == 2 and kind == "dia" and val < d:
                    r, need = val + 1, {val}
                elif side == 1 and kind == "dia" and val > 0:
                    r, need = val, set(range(val, d + 1))
                elif side == 2 and kind == "box" and val > 0:
                    r, need = val, set(range(val, d + 1))
                else:
                    continue
                reqs = {arg: frozenset(need)}
                for (_, other), v in modal:
                    okind = self.kind[other]
                    olab = (side, self.kids[other][0])
                    if (side == 1) == (okind == "box"):  # x >= min(r, v)
                        allowed = frozenset(range(min(r, v), d + 1))
                    elif r <= v:
                        allowed = self.full
                    else:  # x <= v
                        allowed = frozenset(range(0, v + 1))
                    reqs[olab] = reqs.get(olab, self.full) & allowed
                if any(not dom for dom in reqs.values()):
                    return None
                succ = self.solve(reqs)
                if succ is None:
                    return None
                world.edges.append((sign, r, succ))
        return world

    # -- output
    def build(self, root: _World) -> Model:
        worlds, rp, rm, v1, v2 = [], {}, {}, {}, {}
        d = self.d

        def visit(node: _World) -> str:
            name = f"w{len(worlds)}"
            worlds.append(name)
            for (side, n), val in node.labels.items():
                if self.kind[n] == "atom" and val:
                    (v1 if side == 1 else v2)[self.formulas[n].name, name] = Fraction(val, d)
            for sign, r, child in node.edges:
                cname = visit(child)
                (rp if sign == "+" else rm)[name, cname] = Fraction(r, d)
            return name

        visit(root)
        return Model(worlds, rp, rm, v1, v2)


def labelled_solve(f, denom: int, limits: Limits = DEFAULT_LIMITS):
    """Search for a model with values in ``{0, 1/denom, ..., 1}`` where ``f`` is (1, 0).

    Returns :class:`SatInGrid` with the model (root ``w0``) or :class:`NoModelInGrid`.
    ``peak_live`` is the largest number of live labelled entries seen.
    """
    if denom < 1:
        raise ValueError("denom must be >= 1")
    f = as_formula(f)
    solver = _Solver(f, denom, limits)
    root = solver.solve({(1, solver.root): frozenset({denom}), (2, solver.root): frozenset({0})})
    if root is None:
        return NoModelInGrid(solver.peak, solver.states)
    model = solver.build(root)
    if Evaluator(model)(f, "w0") != DESIGNATED:
        raise InternalError("labelled solver produced a model that does not satisfy the formula")
    return SatInGrid(model, "w0", solver.peak, solver.states)
