from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from kg2pm.oracle import Confirmed, oracle_valid
from kg2pm.semantics import DESIGNATED, Evaluator, common_denominator, model_depth, values_of
from kg2pm.syntax import modal_metrics, parse
from kg2pm.tableau import (
    FALSIFY1, FALSIFY2, ONE, SATISFY, ZERO, Branch, FormulaTable, Invalid, LimitExceeded,
    Limits, Sat, Unsat, Valid, applicable_rules, check_sat, class_ranking, extract_model,
    init_tableau, is_atomic, is_closed, prove_valid, refute, show_constraint,
)

from conftest import formulas


def shown(branch):
    return [show_constraint(c, branch.table) for c in branch.constraints]


def node(table, text):
    return table.formulas.index(parse(text))


def fat(table, w, side, text):
    return ("F", w, side, node(table, text))


# ---------------------------------------------------------------- seeds

def test_seeds():
    assert shown(init_tableau(FALSIFY1, "[]p -> []!<>p")) == ["w0:1:[]p -> []!<>p < 1"]
    assert shown(init_tableau(SATISFY, "p")) == ["1 <= w0:1:p", "w0:2:p <= 0"]
    assert shown(init_tableau(FALSIFY2, "p -> p")) == ["0 < w0:2:p -> p"]


# ---------------------------------------------------------------- rules

def test_impl1_strict_rule():
    b = init_tableau(FALSIFY1, "p -> q")
    [(name, trigger, alts)] = applicable_rules(b)
    assert name == "impl1<"
    t = b.table
    assert alts == [[(fat(t, 0, 1, "q"), True, ONE), (fat(t, 0, 1, "q"), True, fat(t, 0, 1, "p"))]]


def test_box1_universal_rule():
    t = FormulaTable(parse("q -> []p"))
    b = Branch(t)
    b.nworlds = 2
    rel = ("R", "+", 0, 1)
    x = fat(t, 0, 1, "q")
    b.add((ZERO, True, rel))
    b.add((x, False, fat(t, 0, 1, "[]p")))
    rules = [(n, trig, alts) for n, trig, alts in applicable_rules(b) if n == "box1>="]
    assert rules == [("box1>=", ((x, False, fat(t, 0, 1, "[]p")), 1),
                      [[(x, False, fat(t, 1, 1, "p"))], [(rel, False, fat(t, 1, 1, "p"))]])]


def test_dia2_witness_rule():
    t = FormulaTable(parse("q -> <>p"))
    b = Branch(t)
    x = fat(t, 0, 1, "q")
    b.add((fat(t, 0, 2, "<>p"), False, x))
    [(name, _, alts)] = applicable_rules(b)
    assert name == "dia2<="
    w1p = fat(t, 1, 2, "p")
    assert alts == [[(ONE, False, x)],
                    [(x, True, ONE), (w1p, True, ("R", "-", 0, 1)), (w1p, False, x)]]


# ---------------------------------------------------------------- closure

def test_closure_examples():
    t = FormulaTable(parse("p & q"))
    p, q = fat(t, 0, 1, "p"), fat(t, 0, 1, "q")
    b = Branch(t)
    b.add((p, True, q))
    assert not is_closed(b)
    b.add((q, True, p))
    assert is_closed(b)
    b = Branch(t)
    b.add((p, True, ZERO))
    assert is_closed(b)
    b = Branch(t)
    b.add((p, False, q))
    assert not is_closed(b)
    b = Branch(t)
    b.add((ONE, False, p))
    b.add((p, True, q))
    assert is_closed(b)


def test_saturate_examples():
    assert refute(FALSIFY1, "p -> p").closed
    assert refute(FALSIFY2, "p -> p").closed
    res = refute(FALSIFY1, "[]p -> []!<>p")
    assert not res.closed
    rels = {c for a, _, b in res.branch.constraints for c in (a, b) if c[0] == "R"}
    assert ("R", "+", 0, 1) in rels and ("R", "-", 1, 2) in rels


def test_limits_surface():
    with pytest.raises(LimitExceeded) as info:
        prove_valid("[][]p -> [][]!<>!<>p", Limits(max_states=2))
    assert info.value.kind == "states" and info.value.where == FALSIFY1


# ---------------------------------------------------------------- extraction

def test_extract_worked_example():
    res = prove_valid("[]p -> []!<>p")
    assert isinstance(res, Invalid) and res.side == 1
    m = res.model
    assert len(m.worlds) == 3 and model_depth(m, "w0") == 2
    assert values_of(m) <= {F(0), F(1, 2), F(1)}
    assert res.value.pos == 0
    assert m.rel("+", "w0", "w1") == 1 and m.rel("-", "w1", "w2") == 1


def test_extract_forced_values():
    res = check_sat("p")
    assert isinstance(res, Sat)
    assert res.model.worlds == ("w0",)
    assert (res.model.val(1, "p", "w0"), res.model.val(2, "p", "w0")) == (1, 0)


def test_extract_chain_ranks():
    t = FormulaTable(parse("p & q"))
    b = Branch(t)
    p, q = fat(t, 0, 1, "p"), fat(t, 0, 1, "q")
    b.add((p, True, q))
    ranks = class_ranking(b)
    assert 0 <= ranks[p] < ranks[q] <= 1
    m = extract_model(b)
    assert m.val(1, "p", "w0") < m.val(1, "q", "w0")


def test_prove_and_sat_examples():
    assert isinstance(prove_valid("p -> p"), Valid)
    assert isinstance(prove_valid("(p & !p) -> q"), Invalid)
    assert isinstance(check_sat("p & !p"), Unsat)
    res = check_sat("~(1 -< ([]p -> []!<>p))")
    assert isinstance(res, Sat)
    assert Evaluator(res.model)(parse("~(1 -< ([]p -> []!<>p))"), "w0") == DESIGNATED


@pytest.mark.parametrize("text", [
    "[](p -> q) -> []p -> []q", "^p -> p", "<>(p | q) -> <>p | <>q", "!!p -> p",
    "[]1", "!<>0",
])
def test_known_validities(text):
    assert prove_valid(text)


def test_trace_format():
    res = prove_valid("p -> p", trace=True)
    assert res.trace == [
        "# tableau falsify1", "impl1<\tw0:1:p -> p < 1\t1/1", "closed\tw0:1:p < w0:1:p",
        "# tableau falsify2", "impl2>\t0 < w0:2:p -> p\t1/1", "closed\tw0:2:p < w0:2:p",
    ]


# ---------------------------------------------------------------- properties

def _check_invalid(f, res):
    ev = Evaluator(res.model)
    value = ev(f, res.world)
    assert value == res.value
    assert value.pos < 1 if res.side == 1 else value.neg > 0
    k, d = modal_metrics(f)
    assert len(res.model.worlds) <= max(k ** (k + 1), k + 1)
    assert model_depth(res.model, res.world) <= d


@settings(max_examples=100)
@given(formulas(5))
def test_prover_sound_and_witnessed(f):
    res = prove_valid(f)
    if res:
        assert isinstance(oracle_valid(f, 2, 2), Confirmed)
    else:
        _check_invalid(f, res)


@settings(max_examples=100)
@given(formulas(5))
def test_extraction_realises_branch(f):
    for goal in (FALSIFY1, FALSIFY2, SATISFY):
        res = refute(goal, f)
        if res.closed:
            continue
        b = res.branch
        extract_model(b)  # raises InternalError on any unrealised constraint
        ranks = class_ranking(b)
        astr = [s for s in ranks if is_atomic(s, b.table)]
        denominator = common_denominator(ranks.values())
        assert denominator <= max(2 * len(astr) * b.nworlds, 1)


@settings(max_examples=60)
@given(formulas(5))
def test_determinism(f):
    a, b = prove_valid(f), prove_valid(f)
    assert type(a) is type(b)
    if not a:
        assert a.model == b.model and a.side == b.side
