"""Constraint tableaux for the logic over finitely branching frames.

A branch is a set of order constraints ``X < Y`` / ``X <= Y`` between
*structures*: labelled formula values ``w:i:phi`` (world, side 1 = truth
support, side 2 = falsity support), relation values ``w R+ u`` / ``w R- u``,
and the constants 0 and 1.  Rules decompose the formula structures; a branch
closes when its constraint graph, together with the implicit edges
``0 <= s <= 1`` and ``0 < 1``, has a cycle through a strict edge.  A complete
open branch is turned into a countermodel by ranking the order-equivalence
classes of its atomic structures.

Structures are plain tuples::

    ("F", w, side, node)   formula value; ``node`` indexes a FormulaTable
    ("C", c)               constant, c in {0, 1}
    ("R", sign, w, u)      relation value, sign in {"+", "-"}

and a constraint is ``(lhs, strict, rhs)`` meaning ``lhs < rhs`` when
``strict`` else ``lhs <= rhs``.
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import networkx as nx

from .semantics import DESIGNATED, Evaluator, Model
from .syntax import (
    And, Atom, Bot, Box, Dia, Formula, Impl, Neg, Top, as_formula, desugar,
    subformulas,
)

ZERO = ("C", 0)
ONE = ("C", 1)

# rule priorities
P_LINEAR, P_SPLIT, P_WITNESS, P_UNIVERSAL = range(4)


class LimitExceeded(RuntimeError):
    """A resource cap was hit; ``kind`` is 'states', 'constraints' or 'time'."""

    def __init__(self, kind: str, limit, where: str = ""):
        self.kind = kind
        self.limit = limit
        self.where = where
        msg = f"{kind} limit {limit} exceeded"
        super().__init__(msg + (f" in {where}" if where else ""))


class InternalError(RuntimeError):
    """An extracted model failed to realise its branch (an engine bug)."""


@dataclass(frozen=True)
class Limits:
    max_states: int = 10_000
    max_constraints: int = 5_000
    time_budget: float = 60.0


# ---------------------------------------------------------------- formulas

class FormulaTable:
    """Desugared subformulas of the goal, indexed so structures hash cheaply."""

    def __init__(self, f: Formula):
        core = desugar(f)
        self.root_formula = core
        self.formulas: list[Formula] = subformulas(core)
        index = {g: i for i, g in enumerate(self.formulas)}
        self.root = index[core]
        self.kind: list[str] = []
        self.kids: list[tuple] = []
        for g in self.formulas:
            if isinstance(g, Atom):
                self.kind.append("atom")
                self.kids.append(())
            elif isinstance(g, Top):
                self.kind.append("top")
                self.kids.append(())
            elif isinstance(g, Bot):
                self.kind.append("bot")
                self.kids.append(())
            elif isinstance(g, (Neg, Box, Dia)):
                self.kind.append({Neg: "neg", Box: "box", Dia: "dia"}[type(g)])
                self.kids.append((index[g.arg],))
            elif isinstance(g, (And, Impl)):
                self.kind.append("and" if isinstance(g, And) else "impl")
                self.kids.append((index[g.left], index[g.right]))
            else:  # desugar guarantees the core fragment
                raise TypeError(g)

    def at(self, w: int, side: int, node: int):
        """Structure for ``w:side:node``; the constants collapse to 0/1."""
        k = self.kind[node]
        if k == "top":
            return ONE if side == 1 else ZERO
        if k == "bot":
            return ZERO if side == 1 else ONE
        return ("F", w, side, node)

    def text(self, node: int) -> str:
        return str(self.formulas[node])


def show_structure(s, table: FormulaTable) -> str:
    if s[0] == "C":
        return str(s[1])
    if s[0] == "R":
        return f"w{s[2]}R{s[1]}w{s[3]}"
    return f"w{s[1]}:{s[2]}:{table.text(s[3])}"


def show_constraint(c, table: FormulaTable) -> str:
    a, strict, b = c
    return f"{show_structure(a, table)} {'<' if strict else '<='} {show_structure(b, table)}"


def is_atomic(s, table: FormulaTable) -> bool:
    return s[0] == "R" or (s[0] == "F" and table.kind[s[3]] == "atom")


# ---------------------------------------------------------------- goals

FALSIFY1, FALSIFY2, SATISFY = "falsify1", "falsify2", "satisfy"


def seed_constraints(goal: str, table: FormulaTable) -> list:
    root = table.at(0, 1, table.root)
    root2 = table.at(0, 2, table.root)
    if goal == FALSIFY1:
        return [(root, True, ONE)]
    if goal == FALSIFY2:
        return [(ZERO, True, root2)]
    if goal == SATISFY:
        return [(ONE, False, root), (root2, False, ZERO)]
    raise ValueError(f"unknown goal {goal!r}")


# ---------------------------------------------------------------- branches

class Branch:
    """One tableau branch with its constraint graph and rule agenda."""

    def __init__(self, table: FormulaTable):
        self.table = table
        self.constraints: list = []
        self.cset: set = set()
        self.succ: dict = {}           # node -> {node: strict}
        self.expanded: set = set()
        self.agenda: list = []         # heap of (priority, seq, application)
        self.seq = 0
        self.nworlds = 1
        self.parent: dict = {0: None}
        self.witness: dict = {}        # (w, side, node) -> world
        self.rels: dict = {}           # (sign, w) -> [u, ...] in appearance order
        self.universal: dict = {}      # (sign, w) -> [trigger, ...]
        self.status = "open"
        self.closing: Optional[tuple] = None

    def copy(self) -> "Branch":
        b = Branch.__new__(Branch)
        b.table = self.table
        b.constraints = list(self.constraints)
        b.cset = set(self.cset)
        b.succ = {k: dict(v) for k, v in self.succ.items()}
        b.expanded = set(self.expanded)
        b.agenda = list(self.agenda)
        b.seq = self.seq
        b.nworlds = self.nworlds
        b.parent = dict(self.parent)
        b.witness = dict(self.witness)
        b.rels = {k: list(v) for k, v in self.rels.items()}
        b.universal = {k: list(v) for k, v in self.universal.items()}
        b.status = self.status
        b.closing = self.closing
        return b

    @property
    def closed(self) -> bool:
        return self.status == "closed"

    def worlds(self) -> list[int]:
        return list(range(self.nworlds))

    # -- graph
    def _strict_path(self, src, dst):
        """None if no path src ->* dst, else whether some such path is strict."""
        if src == dst:
            return False
        seen = {(src, False)}
        stack = [(src, False)]
        found_nonstrict = False
        while stack:
            node, st = stack.pop()
            for nxt, s in self._edges(node):
                state = (nxt, st or s)
                if nxt == dst:
                    if state[1]:
                        return True
                    found_nonstrict = True
                if state not in seen:
                    # a strict visit subsumes a non-strict one
                    if not state[1] and (nxt, True) in seen:
                        continue
                    seen.add(state)
                    stack.append(state)
        return False if found_nonstrict else None

    def _edges(self, node):
        out = self.succ.get(node, {})
        yield from out.items()
        if node != ONE and ONE not in out:
            yield ONE, node == ZERO
        if node == ZERO:
            for other in self.succ:
                if other not in out and other not in (ZERO, ONE):
                    yield other, False

    def entails(self, c) -> bool:
        """Whether constraint ``c`` is already present or trivially true."""
        a, strict, b = c
        if c in self.cset or _trivial(c):
            return True
        return a == b and not strict

    def add(self, c) -> bool:
        """Add a constraint; returns False (and marks the branch closed) on closure."""
        if self.closed:
            return False
        a, strict, b = c
        if a == b:
            if strict:
                self._close(c)
                return False
            return True
        if _trivial(c):
            return True
        if c in self.cset:
            return True
        if _absurd(c):
            self.cset.add(c)
            self.constraints.append(c)
            self._close(c)
            return False
        self.cset.add(c)
        self.constraints.append(c)
        for node in (a, b):
            self.succ.setdefault(node, {})
        self.succ[a][b] = self.succ[a].get(b, False) or strict
        back = self._strict_path(b, a)
        if back is not None and (back or strict):
            self._close(c)
            return False
        self._register(c)
        return True

    def _close(self, c) -> None:
        self.status = "closed"
        self.closing = c

    # -- agenda
    def _push(self, prio: int, app: tuple) -> None:
        self.seq += 1
        heapq.heappush(self.agenda, (prio, self.seq, app))

    def _register(self, c) -> None:
        table = self.table
        a, strict, b = c
        for s in (a, b):
            if s[0] == "R":
                key = (s[1], s[2])
                lst = self.rels.setdefault(key, [])
                if s[3] not in lst:
                    lst.append(s[3])
                    for trig in self.universal.get(key, []):
                        self._push(P_UNIVERSAL, trig + (s[3],))
        for end, s in (("up", a), ("low", b)):
            if s[0] != "F":
                continue
            _, w, side, node = s
            kind = table.kind[node]
            if kind == "atom":
                continue
            prio = _priority(end, side, kind, strict)
            trig = (c, end)
            if prio == P_UNIVERSAL:
                sign = "+" if _universal_sign(end, side, kind) == 1 else "-"
                key = (sign, w)
                self.universal.setdefault(key, []).append(trig)
                for u in self.rels.get(key, []):
                    self._push(P_UNIVERSAL, trig + (u,))
            else:
                self._push(prio, trig)

    def pop(self):
        while self.agenda:
            _, _, app = heapq.heappop(self.agenda)
            if app not in self.expanded:
                return app
        return None


def _trivial(c) -> bool:
    a, strict, b = c
    if strict:
        return a == ZERO and b == ONE
    return b == ONE or a == ZERO


def _absurd(c) -> bool:
    a, strict, b = c
    if a[0] == "C" and b[0] == "C":
        return not (a[1] < b[1] or (not strict and a[1] <= b[1]))
    return (strict and (b == ZERO or a == ONE))


def _priority(end: str, side: int, kind: str, strict: bool) -> int:
    if kind == "neg":
        return P_LINEAR
    if kind == "and":
        linear = (end == "low" and side == 1) or (end == "up" and side == 2)
        return P_LINEAR if linear else P_SPLIT
    if kind == "impl":
        if end == "up" and side == 1:
            return P_LINEAR if strict else P_SPLIT
        if end == "low" and side == 2:
            return P_LINEAR if strict else P_SPLIT
        return P_SPLIT
    if kind in ("box", "dia"):
        return P_UNIVERSAL if _universal_sign(end, side, kind) else P_WITNESS
    raise ValueError(kind)


def _universal_sign(end: str, side: int, kind: str) -> int:
    """Side whose relation the universal rule ranges over, 0 for witness rules."""
    universal = {
        ("low", 1, "box"): 1, ("up", 1, "dia"): 1,
        ("up", 2, "box"): 2, ("low", 2, "dia"): 2,
    }
    return universal.get((end, side, kind), 0)


# ---------------------------------------------------------------- rules

RULE_NAMES = {
    ("up", 1, "neg"): "neg1<=", ("up", 2, "neg"): "neg2<=",
    ("low", 1, "neg"): "neg1>=", ("low", 2, "neg"): "neg2>=",
    ("low", 1, "and"): "and1>=", ("up", 2, "and"): "and2<=",
    ("up", 1, "and"): "and1<=", ("low", 2, "and"): "and2>=",
    ("low", 1, "impl"): "impl1>=", ("up", 2, "impl"): "impl2<=",
    ("low", 1, "box"): "box1>=", ("up", 1, "dia"): "dia1<=",
    ("low", 1, "dia"): "dia1>=", ("low", 2, "box"): "box2>=",
    ("up", 2, "box"): "box2<=", ("low", 2, "dia"): "dia2>=",
}


def _rule_name(end, side, kind, strict) -> str:
    if kind == "impl" and (end, side) == ("up", 1):
        return "impl1<" if strict else "impl1<="
    if kind == "impl" and (end, side) == ("low", 2):
        return "impl2>" if strict else "impl2>="
    if kind == "box" and (end, side) == ("up", 1):
        return "box1<" if strict else "box1<="
    if kind == "dia" and (end, side) == ("up", 2):
        return "dia2<" if strict else "dia2<="
    return RULE_NAMES[end, side, kind]


def alternatives(branch: Branch, app) -> tuple[str, list]:
    """Rule name and its conclusion sets for application ``app``.

    Each alternative is ``(constraints, new_world)`` where ``new_world`` is a
    ``(w, side, node)`` witness key whose world must be created first, or None.
    """
    t = branch.table
    c, end = app[0], app[1]
    a, strict, b = c
    F, X = (a, b) if end == "up" else (b, a)
    _, w, side, node = F
    kind = t.kind[node]
    kids = t.kids[node]
    other = 3 - side
    name = _rule_name(end, side, kind, strict)

    def rel_(sub, x):  # same relation as the trigger, between sub and X
        return (sub, strict, x) if end == "up" else (x, strict, sub)

    if kind == "neg":
        return name, [([rel_(t.at(w, other, kids[0]), X)], None)]
    if kind == "and":
        l, r = t.at(w, side, kids[0]), t.at(w, side, kids[1])
        if (end == "low" and side == 1) or (end == "up" and side == 2):
            return name, [([rel_(l, X), rel_(r, X)], None)]
        return name, [([rel_(l, X)], None), ([rel_(r, X)], None)]
    if kind == "impl":
        ante, cons = t.at(w, side, kids[0]), t.at(w, side, kids[1])
        if end == "up" and side == 1:
            if strict:
                return name, [([(cons, True, X), (cons, True, ante)], None)]
            return name, [([(ONE, False, X)], None),
                          ([(X, True, ONE), (cons, False, X), (cons, True, ante)], None)]
        if end == "low" and side == 2:
            if strict:
                return name, [([(X, True, cons), (ante, True, cons)], None)]
            return name, [([(X, False, ZERO)], None),
                          ([(ZERO, True, X), (X, False, cons), (ante, True, cons)], None)]
        if end == "low" and side == 1:
            return name, [([(ante, False, cons)], None), ([rel_(cons, X)], None)]
        # up, side 2
        return name, [([(cons, False, ante)], None), ([rel_(cons, X)], None)]
    # modal
    sign = "+" if side == 1 else "-"
    if len(app) == 3:  # universal, over the relation term w S u
        u = app[2]
        R = ("R", sign, w, u)
        sub = t.at(u, side, kids[0])
        if end == "up":  # dia1<=, box2<=
            return name, [([rel_(sub, X)], None), ([rel_(R, X)], None)]
        return name, [([rel_(sub, X)], None), ([(R, False, sub)], None)]
    key = (w, side, node)
    v = branch.witness.get(key, branch.nworlds)
    R = ("R", sign, w, v)
    sub = t.at(v, side, kids[0])
    new = None if key in branch.witness else key
    if end == "low":  # dia1>=, box2>=
        return name, [([rel_(R, X), rel_(sub, X)], new)]
    if strict:  # box1<, dia2<
        return name, [([(sub, True, R), (sub, True, X)], new)]
    return name, [([(ONE, False, X)], None),
                  ([(X, True, ONE), (sub, True, R), (sub, False, X)], new)]


def applicable_rules(branch: Branch) -> list:
    """Pending rule applications as ``(rule, trigger, alternatives)``.

    ``trigger`` is the premise constraint, extended by the target world for
    universal modal rules; ``alternatives`` lists the conclusion sets.
    """
    out = []
    for _, _, app in sorted(branch.agenda):
        if app in branch.expanded or _redundant(branch, app):
            continue
        name, alts = alternatives(branch, app)
        trigger = app[0] if len(app) == 2 else (app[0], app[2])
        out.append((name, trigger, [cs for cs, _ in alts]))
    return out


def _redundant(branch: Branch, app) -> bool:
    """Side condition: with ``X < 1`` and ``X < Y`` present only the latter is expanded."""
    c, end = app[0], app[1]
    a, strict, b = c
    if not strict or len(app) != 2:
        return False
    if end == "up" and b == ONE:
        return any(x == a and s and y[0] != "C" for x, s, y in branch.constraints)
    if end == "low" and a == ZERO:
        return any(y == b and s and x[0] != "C" for x, s, y in branch.constraints)
    return False


def _apply(branch: Branch, constraints, new) -> bool:
    if new is not None:
        w = new[0]
        v = branch.nworlds
        branch.nworlds += 1
        branch.parent[v] = w
        branch.witness[new] = v
    for c in constraints:
        if not branch.add(c):
            return False
    return True


# ---------------------------------------------------------------- search

@dataclass
class SaturationResult:
    closed: bool
    branch: Optional[Branch] = None
    states: int = 0
    trace: list = field(default_factory=list)


def init_tableau(goal: str, f) -> Branch:
    f = as_formula(f)
    table = FormulaTable(f)
    branch = Branch(table)
    for c in seed_constraints(goal, table):
        branch.add(c)
    return branch


def saturate(branch: Branch, limits: Limits = Limits(), *, trace: bool = False,
             where: str = "") -> SaturationResult:
    """Depth-first saturation; returns the first complete open branch if any.

    Alternatives are explored left to right.  Within a branch, rules are
    taken by priority: non-branching propositional, branching propositional,
    witness-creating modal, then universal modal rules.
    """
    start = time.monotonic()
    states = 0
    lines: list = []
    t = branch.table
    stack = [(branch, None)]
    while stack:
        br, line = stack.pop()
        if line is not None:
            lines.append(line)
        while not br.closed:
            if len(br.constraints) > limits.max_constraints:
                raise LimitExceeded("constraints", limits.max_constraints, where)
            if time.monotonic() - start > limits.time_budget:
                raise LimitExceeded("time", limits.time_budget, where)
            app = br.pop()
            if app is None:
                br.status = "complete"
                return SaturationResult(False, br, states, lines)
            br.expanded.add(app)
            if _redundant(br, app):
                continue
            name, alts = alternatives(br, app)
            if any(new is None and all(br.entails(c) for c in cs) for cs, new in alts):
                continue
            states += 1
            if states > limits.max_states:
                raise LimitExceeded("states", limits.max_states, where)
            trig = show_constraint(app[0], t) if trace else None
            if len(alts) == 1:
                if trace:
                    lines.append(f"{name}\t{trig}\t1/1")
                _apply(br, *alts[0])
                continue
            children = []
            for k, (cs, new) in enumerate(alts):
                child = br.copy()
                _apply(child, cs, new)
                children.append((child, f"{name}\t{trig}\t{k + 1}/{len(alts)}" if trace else None))
            stack.extend(reversed(children))
            break
        else:
            if trace:
                lines.append(f"closed\t{show_constraint(br.closing, t)}")
    return SaturationResult(True, None, states, lines)


# ---------------------------------------------------------------- extraction

def _rank_graph(branch: Branch) -> nx.DiGraph:
    """Explicit constraints plus the implicit bounds, as a weighted digraph."""
    g = nx.DiGraph()
    g.add_nodes_from([ZERO, ONE])
    g.add_edge(ZERO, ONE, strict=True)

    def edge(a, b, strict):
        if g.has_edge(a, b):
            g[a][b]["strict"] = g[a][b]["strict"] or strict
        else:
            g.add_edge(a, b, strict=strict)

    for a, strict, b in branch.constraints:
        edge(a, b, strict)
    for node in list(g.nodes):
        if node not in (ZERO, ONE):
            edge(ZERO, node, False)
            edge(node, ONE, False)
    # relation terms with nothing above them but 1 are set to 1
    for node in list(g.nodes):
        if node[0] == "R" and all(v == ONE and not g[node][v]["strict"]
                                  for v in g.successors(node)):
            edge(ONE, node, False)
    return g


def class_ranking(branch: Branch) -> dict:
    """Value of every atomic or constant structure of an open branch.

    Order-equivalence classes are the strongly connected components of the
    constraint graph (none contains a strict edge on an open branch).  A class
    sits at the length of the longest path reaching it, counting strict edges
    only, so ``<`` always climbs a level and ``<=`` never has to.  Values are
    levels divided by the level of the class of 1.
    """
    table = branch.table
    g = _rank_graph(branch)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    strict_between = {}
    for a, b, data in g.edges(data=True):
        ca, cb = members[a], members[b]
        if ca != cb:
            strict_between[ca, cb] = strict_between.get((ca, cb), False) or data["strict"]
    level = {}
    for c in nx.topological_sort(cond):
        level[c] = max((level[p] + strict_between[p, c] for p in cond.predecessors(c)), default=0)
    top = level[members[ONE]]
    if top == 0 or level[members[ZERO]] != 0:
        raise InternalError("open branch identifies 0 and 1")
    return {s: Fraction(level[c], top) for s, c in members.items()
            if s[0] == "C" or is_atomic(s, table)}


def extract_model(branch: Branch) -> Model:
    """Countermodel read off a complete open branch, checked against every constraint."""
    table = branch.table
    ranks = class_ranking(branch)
    worlds = [f"w{i}" for i in range(branch.nworlds)]
    rp, rm, v1, v2 = {}, {}, {}, {}
    for s, val in ranks.items():
        if not val:
            continue
        if s[0] == "R":
            (rp if s[1] == "+" else rm)[worlds[s[2]], worlds[s[3]]] = val
        elif s[0] == "F":
            (v1 if s[2] == 1 else v2)[table.formulas[s[3]].name, worlds[s[1]]] = val
    model = Model(worlds, rp, rm, v1, v2)
    _realise(branch, model)
    return model


def _realise(branch: Branch, model: Model) -> None:
    ev = Evaluator(model)
    table = branch.table

    def value(s):
        if s[0] == "C":
            return Fraction(s[1])
        if s[0] == "R":
            return model.rel(s[1], f"w{s[2]}", f"w{s[3]}")
        pair = ev(table.formulas[s[3]], f"w{s[1]}")
        return pair.pos if s[2] == 1 else pair.neg

    for c in branch.constraints:
        a, strict, b = c
        x, y = value(a), value(b)
        if not (x < y if strict else x <= y):
            raise InternalError(
                f"extracted model violates {show_constraint(c, table)} ({x} vs {y})")


# ---------------------------------------------------------------- drivers

@dataclass
class Valid:
    states: int = 0
    trace: list = field(default_factory=list)

    def __bool__(self):
        return True


@dataclass
class Invalid:
    model: Model
    world: str
    side: int
    value: object = None
    states: int = 0
    trace: list = field(default_factory=list)

    def __bool__(self):
        return False


@dataclass
class Sat:
    model: Model
    world: str
    states: int = 0
    trace: list = field(default_factory=list)

    def __bool__(self):
        return True


@dataclass
class Unsat:
    states: int = 0
    trace: list = field(default_factory=list)

    def __bool__(self):
        return False


def refute(goal: str, f, limits: Limits = Limits(), *, trace: bool = False) -> SaturationResult:
    """Run one tableau for ``goal``; the result's branch is open iff the goal is attainable."""
    return saturate(init_tableau(goal, f), limits, trace=trace, where=goal)


def prove_valid(f, limits: Limits = Limits(), *, trace: bool = False):
    """Decide validity: both the truth-side and falsity-side tableaux must close."""
    f = as_formula(f)
    states = 0
    lines: list = []
    for side, goal in ((1, FALSIFY1), (2, FALSIFY2)):
        res = refute(goal, f, limits, trace=trace)
        states += res.states
        if trace:
            lines.append(f"# tableau {goal}")
            lines.extend(res.trace)
        if not res.closed:
            model = extract_model(res.branch)
            value = Evaluator(model)(f, "w0")
            return Invalid(model, "w0", side, value, states, lines)
    return Valid(states, lines)


def check_sat(f, limits: Limits = Limits(), *, trace: bool = False):
    """Decide whether ``f`` takes value (1, 0) at some world of some model."""
    f = as_formula(f)
    res = refute(SATISFY, f, limits, trace=trace)
    lines = [f"# tableau {SATISFY}", *res.trace] if trace else []
    if res.closed:
        return Unsat(res.states, lines)
    model = extract_model(res.branch)
    if Evaluator(model)(f, "w0") != DESIGNATED:
        raise InternalError("extracted model does not satisfy the formula")
    return Sat(model, "w0", res.states, lines)


def is_closed(branch: Branch) -> bool:
    """Whether the branch's constraint graph has a cycle through a strict edge."""
    return branch.closed
