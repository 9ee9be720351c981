from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kg2pm.semantics import Model
from kg2pm.syntax import (
    BOT, TOP, And, Atom, Box, Coimpl, Delta, Dia, GNeg, Impl, Neg, Or,
)

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ATOMS = ("p", "q")


def formulas(max_leaves: int = 6, atoms=ATOMS, constants: bool = True):
    leaves = st.sampled_from([Atom(a) for a in atoms] + ([TOP, BOT] if constants else []))
    unary = (Neg, GNeg, Delta, Box, Dia)
    binary = (And, Or, Impl, Coimpl)

    def extend(children):
        return st.one_of(
            st.builds(lambda c, a: c(a), st.sampled_from(unary), children),
            st.builds(lambda c, a, b: c(a, b), st.sampled_from(binary), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def values(max_denom: int = 6):
    return st.integers(1, max_denom).flatmap(
        lambda d: st.integers(0, d).map(lambda n: Fraction(n, d)))


@st.composite
def models(draw, max_worlds: int = 3, atoms=ATOMS, crisp: bool = False):
    n = draw(st.integers(1, max_worlds))
    ws = [f"w{i}" for i in range(n)]
    pairs = [(a, b) for a in ws for b in ws]
    rel_value = st.sampled_from([Fraction(0), Fraction(1)]) if crisp else values()
    rp = {e: draw(rel_value) for e in pairs}
    rm = {e: draw(rel_value) for e in pairs}
    v1 = {(p, w): draw(values()) for p in atoms for w in ws}
    v2 = {(p, w): draw(values()) for p in atoms for w in ws}
    return Model(ws, rp, rm, v1, v2)


@pytest.fixture
def four_world_model():
    F = Fraction
    return Model(
        ["w0", "w1", "w2", "w3"],
        {("w0", "w1"): 1, ("w0", "w3"): 1},
        {("w0", "w2"): 1, ("w0", "w3"): 1},
        {("p", "w0"): 1, ("p", "w1"): F(4, 5), ("p", "w2"): F(2, 5), ("p", "w3"): F(3, 5)},
        {("p", "w1"): F(1, 4), ("p", "w2"): F(3, 4), ("p", "w3"): F(2, 4)},
    )


@pytest.fixture
def one_edge_model():
    half = Fraction(1, 2)
    return Model(["w", "w1"], {("w", "w1"): half}, {("w", "w1"): half},
                 {("p", "w1"): 1}, {("p", "w1"): Fraction(2, 3)})


_ACCEPTANCE_LINES: list = []


@pytest.fixture
def acceptance_report():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
