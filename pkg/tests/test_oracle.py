import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kg2pm.oracle import (
    BudgetExceeded, Confirmed, Countermodel, NotFound, Sat, dependencies,
    oracle_sat, oracle_valid,
)
from kg2pm.semantics import DESIGNATED, evaluate
from kg2pm.syntax import parse

from conftest import formulas


def test_valid_confirmed():
    assert isinstance(oracle_valid("p -> p", 2, 3), Confirmed)


def test_paraconsistent_countermodel_frozen():
    res = oracle_valid("(p & !p) -> q", 1, 1)
    assert isinstance(res, Countermodel)
    m = res.model
    assert (m.val(1, "p", "w0"), m.val(2, "p", "w0")) == (1, 1)
    assert (m.val(1, "q", "w0"), m.val(2, "q", "w0")) == (0, 0)
    assert res.value == (0, 0)


def test_worked_example_in_grid():
    res = oracle_valid("[]p -> []!<>p", 3, 2)
    assert isinstance(res, Countermodel)
    assert evaluate(res.model, res.world, "[]p -> []!<>p") != DESIGNATED


def test_sat_examples():
    res = oracle_sat("p", 1, 1)
    assert isinstance(res, Sat) and res.model.val(1, "p", "w0") == 1
    assert isinstance(oracle_sat("p & !p", 2, 2), NotFound)
    res = oracle_sat("~(1 -< ([]p -> []!<>p))", 3, 2)
    assert isinstance(res, Sat)
    assert evaluate(res.model, "w0", "~(1 -< ([]p -> []!<>p))") == DESIGNATED


def test_budget():
    with pytest.raises(BudgetExceeded):
        oracle_valid("[]p -> [](p | q)", 3, 4, budget=1000)


def test_dependencies_skip_other_side():
    deps = dependencies(parse("p"), 1, 1)
    assert deps == {("A", 1, "p", 0)}
    deps = dependencies(parse("[]p"), 2, 2)
    assert ("R", "-", 0, 1) in deps and ("R", "+", 0, 1) not in deps


@settings(max_examples=40)
@given(formulas(4), st.integers(1, 2))
def test_grid_refinement_monotone(f, d):
    res = oracle_valid(f, 1, d)
    if isinstance(res, Countermodel):
        assert isinstance(oracle_valid(f, 1, 2 * d), Countermodel)
