"""Seeded random formulas for cross-engine testing."""

from __future__ import annotations

import random

from .syntax import (
    BOT, TOP, And, Atom, Box, Coimpl, Delta, Dia, Formula, GNeg, Impl, Neg, Or,
    size,
)

_UNARY = (Neg, GNeg, Delta, Box, Dia)
_BINARY = (And, Or, Impl, Coimpl)


def _modalities(f: Formula) -> int:
    if isinstance(f, (Box, Dia)):
        return 1 + _modalities(f.arg)
    if isinstance(f, _UNARY):
        return _modalities(f.arg)
    if isinstance(f, _BINARY):
        return _modalities(f.left) + _modalities(f.right)
    return 0


def random_formula(rng: random.Random, max_size: int, atom_names=("p", "q"),
                   *, constants: bool = True) -> Formula:
    """A random formula with at most ``max_size`` parse-tree nodes."""
    if max_size <= 1 or rng.random() < 0.2:
        if constants and rng.random() < 0.1:
            return rng.choice((TOP, BOT))
        return Atom(rng.choice(atom_names))
    if max_size == 2 or rng.random() < 0.45:
        return rng.choice(_UNARY)(random_formula(rng, max_size - 1, atom_names, constants=constants))
    budget = max_size - 1
    left = rng.randint(1, budget - 1)
    ctor = rng.choice(_BINARY)
    return ctor(random_formula(rng, left, atom_names, constants=constants),
                random_formula(rng, budget - left, atom_names, constants=constants))


def formula_corpus(count: int, *, seed: int = 0, max_size: int = 9,
                   max_modalities: int = 3, atom_names=("p", "q")) -> list[Formula]:
    """``count`` distinct formulas, reproducible from ``seed``.

    Modalities are counted on the surface formula.
    """
    rng = random.Random(seed)
    out: dict[Formula, None] = {}
    while len(out) < count:
        f = random_formula(rng, max_size, atom_names)
        if size(f) <= max_size and _modalities(f) <= max_modalities:
            out.setdefault(f, None)
    return list(out)
