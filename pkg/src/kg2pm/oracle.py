"""Brute-force validity and satisfiability over a finite value grid.

Enumerates every model with at most ``max_worlds`` worlds whose relation and
atom values lie in ``{0, 1/d, ..., 1}``.  Values are handled as integer
numerators over ``d`` in numpy arrays, which is exact because every Gödel
operation returns one of its arguments or a constant.

Two reductions keep the enumeration tractable without changing its answer:

* only the root ``w0`` is tested: every pointed model with another world as
  its point appears again with the worlds relabelled;
* variables that the tested value cannot depend on (relation values out of
  unreachable worlds, atom values on the other side of the pair, ...) are
  fixed at 0, found by a syntactic dependency pass.

Search order: number of worlds ascending, then (for validity) the truth side
before the falsity side, then lexicographic over the grid with relation
values before atom values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .semantics import Model, TruthPair
from .syntax import (
    And, Atom, Bot, Box, Coimpl, Delta, Dia, Formula, GNeg, Impl, Neg, Or, Top,
    as_formula, atoms,
)

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 20


class BudgetExceeded(RuntimeError):
    def __init__(self, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} assignments, budget is {budget}")


@dataclass
class Confirmed:
    """No countermodel in the searched class (a bounded claim only)."""

    searched: int = 0

    def __bool__(self):
        return True


@dataclass
class Countermodel:
    model: Model
    world: str
    value: TruthPair

    def __bool__(self):
        return False


@dataclass
class Sat:
    model: Model
    world: str

    def __bool__(self):
        return True


@dataclass
class NotFound:
    searched: int = 0

    def __bool__(self):
        return False


def _world(i: int) -> str:
    return f"w{i}"


def dependencies(f: Formula, n: int, side: int, w: int = 0) -> set:
    """Grid variables that ``v_side(f, w)`` can depend on in an ``n``-world model.

    Variables are ``("R", sign, i, j)`` and ``("A", side, atom, i)``.
    """
    out: set = set()
    seen = set()
    stack = [(f, w, side)]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        g, w, s = node
        if isinstance(g, Atom):
            out.add(("A", s, g.name, w))
        elif isinstance(g, Neg):
            stack.append((g.arg, w, 3 - s))
        elif isinstance(g, (GNeg, Delta)):
            stack.append((g.arg, w, s))
        elif isinstance(g, (And, Or, Impl, Coimpl)):
            stack.append((g.left, w, s))
            stack.append((g.right, w, s))
        elif isinstance(g, (Box, Dia)):
            sign = "+" if s == 1 else "-"
            for u in range(n):
                out.add(("R", sign, w, u))
                stack.append((g.arg, u, s))
    return out


def _sort_vars(vs) -> list:
    rel = sorted(v for v in vs if v[0] == "R")
    at = sorted((v for v in vs if v[0] == "A"), key=lambda v: (v[3], v[2], v[1]))
    return rel + at


class _Grid:
    """Vectorised evaluation of one formula over a block of grid assignments."""

    def __init__(self, n: int, d: int, env: dict):
        self.n = n
        self.d = d
        self.env = env  # variable -> int array or scalar
        self.memo: dict = {}

    def var(self, key):
        return self.env.get(key, 0)

    def ev(self, g: Formula, w: int):
        key = (g, w)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        res = self._ev(g, w)
        self.memo[key] = res
        return res

    def _ev(self, g: Formula, w: int):
        d = self.d
        if isinstance(g, Atom):
            return self.var(("A", 1, g.name, w)), self.var(("A", 2, g.name, w))
        if isinstance(g, Top):
            return d, 0
        if isinstance(g, Bot):
            return 0, d
        if isinstance(g, Neg):
            a, b = self.ev(g.arg, w)
            return b, a
        if isinstance(g, And):
            (a1, a2), (b1, b2) = self.ev(g.left, w), self.ev(g.right, w)
            return np.minimum(a1, b1), np.maximum(a2, b2)
        if isinstance(g, Or):
            (a1, a2), (b1, b2) = self.ev(g.left, w), self.ev(g.right, w)
            return np.maximum(a1, b1), np.minimum(a2, b2)
        if isinstance(g, Impl):
            (a1, a2), (b1, b2) = self.ev(g.left, w), self.ev(g.right, w)
            return _impl(a1, b1, d), _coimpl(b2, a2)
        if isinstance(g, Coimpl):
            (a1, a2), (b1, b2) = self.ev(g.left, w), self.ev(g.right, w)
            return _coimpl(a1, b1), _impl(b2, a2, d)
        if isinstance(g, GNeg):
            a1, a2 = self.ev(g.arg, w)
            return np.where(np.asarray(a1) > 0, 0, d), np.where(np.asarray(a2) < d, d, 0)
        if isinstance(g, Delta):
            a1, a2 = self.ev(g.arg, w)
            return np.where(np.asarray(a1) < d, 0, d), np.where(np.asarray(a2) > 0, d, 0)
        if isinstance(g, (Box, Dia)):
            pos = neg = None
            for u in range(self.n):
                rp, rm = self.var(("R", "+", w, u)), self.var(("R", "-", w, u))
                a1, a2 = self.ev(g.arg, u)
                if isinstance(g, Box):
                    tp, tn = _impl(rp, a1, d), np.minimum(rm, a2)
                    pos = tp if pos is None else np.minimum(pos, tp)
                    neg = tn if neg is None else np.maximum(neg, tn)
                else:
                    tp, tn = np.minimum(rp, a1), _impl(rm, a2, d)
                    pos = tp if pos is None else np.maximum(pos, tp)
                    neg = tn if neg is None else np.minimum(neg, tn)
            return pos, neg
        raise TypeError(g)


def _impl(a, b, d):
    return np.where(np.asarray(a) <= b, d, b)


def _coimpl(a, b):
    return np.where(np.asarray(a) <= b, 0, a)


def _build_model(n: int, d: int, assignment: dict) -> Model:
    rp, rm, v1, v2 = {}, {}, {}, {}
    for key, num in assignment.items():
        if not num:
            continue
        val = Fraction(int(num), d)
        if key[0] == "R":
            (rp if key[1] == "+" else rm)[_world(key[2]), _world(key[3])] = val
        else:
            (v1 if key[1] == 1 else v2)[key[2], _world(key[3])] = val
    return Model([_world(i) for i in range(n)], rp, rm, v1, v2)


def _search(f: Formula, n: int, d: int, variables: list, predicate, budget: int, counter: list):
    """First assignment (lexicographic) satisfying ``predicate``, or None."""
    k = len(variables)
    base = d + 1
    total = base ** k
    counter[0] += total
    if counter[0] > budget:
        raise BudgetExceeded(counter[0], budget)
    # vectorise the trailing variables, loop over the leading ones
    inner = 0
    while inner < k and base ** (inner + 1) <= _CHUNK:
        inner += 1
    outer_vars, inner_vars = variables[: k - inner], variables[k - inner:]
    size = base ** inner
    grids = []
    for pos in range(inner):
        stride = base ** (inner - pos - 1)
        grids.append((np.arange(size) // stride) % base)
    for outer in itertools.product(range(base), repeat=len(outer_vars)):
        env = dict(zip(outer_vars, outer))
        env.update(zip(inner_vars, grids))
        grid = _Grid(n, d, env)
        pos, neg = grid.ev(f, 0)
        mask = np.broadcast_to(predicate(np.asarray(pos), np.asarray(neg), d), (size,))
        if mask.any():
            idx = int(np.argmax(mask))
            assignment = dict(zip(outer_vars, outer))
            assignment.update({v: int(g[idx]) for v, g in zip(inner_vars, grids)})
            return assignment
    return None


def _check_args(max_worlds: int, denom: int) -> None:
    if max_worlds < 1:
        raise ValueError("max_worlds must be >= 1")
    if denom < 1:
        raise ValueError("denom must be >= 1")


def oracle_valid(f, max_worlds: int, denom: int, *, budget: int = DEFAULT_BUDGET):
    """Search the grid for a model and world where ``f`` is not (1, 0).

    Returns :class:`Countermodel` (root ``w0``) or :class:`Confirmed`.
    """
    from .semantics import evaluate

    f = as_formula(f)
    _check_args(max_worlds, denom)
    counter = [0]
    for n in range(1, max_worlds + 1):
        for side in (1, 2):
            variables = _sort_vars(dependencies(f, n, side))
            if side == 1:
                pred = lambda p, q, d: p < d  # noqa: E731
            else:
                pred = lambda p, q, d: q > 0  # noqa: E731
            hit = _search(f, n, denom, variables, pred, budget, counter)
            if hit is not None:
                model = _build_model(n, denom, hit)
                return Countermodel(model, "w0", evaluate(model, "w0", f))
    return Confirmed(counter[0])


def oracle_sat(f, max_worlds: int, denom: int, *, budget: int = DEFAULT_BUDGET):
    """Search the grid for a model and world where ``f`` takes value (1, 0)."""
    f = as_formula(f)
    _check_args(max_worlds, denom)
    counter = [0]
    for n in range(1, max_worlds + 1):
        variables = _sort_vars(dependencies(f, n, 1) | dependencies(f, n, 2))
        hit = _search(f, n, denom, variables, lambda p, q, d: (p == d) & (q == 0), budget, counter)
        if hit is not None:
            return Sat(_build_model(n, denom, hit), "w0")
    return NotFound(counter[0])


def random_model(rng, atom_names, *, max_worlds: int = 3, max_denom: int = 6,
                 density: float = 0.6) -> Model:
    """A random finite model with values over a random grid ``1/d``, ``d <= max_denom``."""
    n = rng.randint(1, max_worlds)
    d = rng.randint(1, max_denom)
    ws = [_world(i) for i in range(n)]

    def value():
        return Fraction(rng.randint(0, d), d)

    rp = {(a, b): value() for a in ws for b in ws if rng.random() < density}
    rm = {(a, b): value() for a in ws for b in ws if rng.random() < density}
    v1 = {(p, w): value() for p in atom_names for w in ws}
    v2 = {(p, w): value() for p in atom_names for w in ws}
    return Model(ws, rp, rm, v1, v2)


def random_falsification(f, samples: int, seed: int, **kw) -> Optional[tuple]:
    """Seeded random search for a world where ``f`` is not (1, 0)."""
    import random

    from .semantics import DESIGNATED, Evaluator

    f = as_formula(f)
    rng = random.Random(seed)
    names = atoms(f) or ["p"]
    for _ in range(samples):
        m = random_model(rng, names, **kw)
        ev = Evaluator(m)
        for w in m.worlds:
            if ev(f, w) != DESIGNATED:
                return m, w
    return None
