import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings

from kg2pm.frames import (
    CRISP_PLUS_FORMULA, MONO_FORMULA, EdgeNotDiffering,
    EdgeNotFractional, NotCrisp, crispness_countermodel, definability_suite,
    frame_report, mono_countermodel, random_frame, split, star,
)
from kg2pm.semantics import DESIGNATED, Evaluator, Model, evaluate

from conftest import formulas, models

half = F(1, 2)


def test_frame_report_examples(four_world_model, one_edge_model):
    crisp = Model(["a", "b"], {("a", "b"): 1}, {("a", "b"): 1})
    rep = frame_report(crisp)
    assert rep.crisp_plus and rep.crisp_minus and rep.mono_relational and rep.finitely_branching
    rep = frame_report(one_edge_model.frame())
    assert not rep.crisp_plus and rep.witnesses["crisp_plus"] == ("w", "w1", half)
    assert rep.mono_relational
    assert not frame_report(four_world_model.frame()).mono_relational


def test_star_examples(four_world_model):
    one = Model(["w"], v1={("p", "w"): 1}, v2={("p", "w"): 1})
    s = star(one)
    assert (s.val(1, "p", "w"), s.val(2, "p", "w")) == (0, 0)
    fixed = Model(["w"], v1={("p", "w"): 1})
    assert star(fixed) == fixed
    s = star(four_world_model)
    assert s.rplus == four_world_model.rminus
    assert evaluate(s, "w0", "[]p") == (1 - F(3, 4), 1 - F(3, 5))
    with pytest.raises(NotCrisp):
        star(Model(["w"], {("w", "w"): half}))


def test_split_examples(four_world_model):
    m, corr = split(Model(["w"], v1={("p", "w"): half}))
    assert corr == {"w": ["@+w", "@-w"]}
    assert all(m.val(1, "p", x) == half for x in m.worlds)
    m, _ = split(Model(["a", "b"], {("a", "b"): 1}))
    for x in m.worlds:
        for y in m.worlds:
            assert not (m.rel("+", x, y) and m.rel("-", x, y))
    m, corr = split(four_world_model)
    for x in corr["w0"]:
        assert evaluate(m, x, "[]p") == (F(3, 5), F(3, 4))
        assert evaluate(m, x, "<>p") == (F(4, 5), F(2, 4))


def test_crispness_plus_construction():
    f = Model(["w", "v"], {("w", "v"): half})
    m, w, formula = crispness_countermodel(f, "+")
    assert formula == CRISP_PLUS_FORMULA
    assert (m.val(1, "p", "v"), m.val(2, "p", "v")) == (half, 0)
    assert evaluate(m, w, "^[]p") == DESIGNATED
    assert evaluate(m, w, "[]^p") == (0, 0)


def test_crispness_minus_construction():
    f = Model(["w", "v"], {("w", "v"): 1}, {("w", "v"): half})
    m, w, formula = crispness_countermodel(f, "-")
    assert (m.val(1, "p", "v"), m.val(2, "p", "v")) == (1, half)
    assert evaluate(m, w, "<>~~p") == DESIGNATED
    assert evaluate(m, w, "~~<>p") == (1, 1)
    # a second R- successor defeats the (1, 0) background; (1, 1) is used
    g = Model(["w", "v", "u"], {}, {("w", "v"): half, ("w", "u"): 1})
    m, w, formula = crispness_countermodel(g, "-")
    assert m.val(2, "p", "u") == 1
    assert evaluate(m, w, formula) != DESIGNATED


def test_crispness_precondition():
    crisp = Model(["w", "v"], {("w", "v"): 1}, {("w", "v"): 1})
    with pytest.raises(EdgeNotFractional):
        crispness_countermodel(crisp, "+")
    with pytest.raises(EdgeNotFractional):
        crispness_countermodel(crisp, "-", ("w", "v"))


def test_mono_construction():
    f = Model(["w", "v"], {("w", "v"): 1})
    m, w = mono_countermodel(f)
    assert evaluate(m, w, MONO_FORMULA) != DESIGNATED
    assert evaluate(m, w, "[]p") == (0, 0)
    assert evaluate(m, w, "!<>!p") == (1, 0)
    g = Model(["w", "v"], {("w", "v"): F(2, 3)}, {("w", "v"): F(1, 3)})
    m, w = mono_countermodel(g)
    assert evaluate(m, w, "[]p") == (F(1, 3), 0)
    assert evaluate(m, w, "!<>!p") == (1, 0)
    with pytest.raises(EdgeNotDiffering):
        mono_countermodel(Model(["w"], {("w", "w"): half}, {("w", "w"): half}))


def test_suite_examples():
    rng = random.Random(5)
    crisp = random_frame(rng, crisp=True)
    rep = definability_suite(crisp, 30, seed=1)
    assert rep.consistent()
    assert "seed 1" in rep.text()
    fuzzy = Model(["w", "v"], {("w", "v"): half}, {("w", "v"): half})
    rep = definability_suite(fuzzy, 30, seed=2)
    assert rep.consistent()
    fb = [c for c in rep.checks if c.name == "finitely_branching"]
    assert fb and not any(c.violations for c in fb)
    m, w, formula = crispness_countermodel(fuzzy, "+")
    assert Evaluator(m)(formula, w) != DESIGNATED


@given(models(crisp=True), formulas(6))
def test_star_law(m, f):
    s = star(m, atoms=("p", "q"))
    ev, evs = Evaluator(m), Evaluator(s)
    for w in m.worlds:
        x, y = ev(f, w)
        assert evs(f, w) == (1 - y, 1 - x)
    assert star(s, atoms=("p", "q")) == m


@given(models(), formulas(6))
def test_split_law(m, f):
    s, corr = split(m)
    ev, evs = Evaluator(m), Evaluator(s)
    for w in m.worlds:
        assert corr[w]
        for x in corr[w]:
            assert evs(f, x) == ev(f, w)


@given(models())
def test_split_model_property(m):
    s, _ = split(m)
    for x in s.worlds:
        for y in s.worlds:
            assert not (s.rel("+", x, y) > 0 and s.rel("-", x, y) > 0)


NEG_FREE = formulas(6).filter(lambda f: "Neg(" not in repr(f))


@given(models(crisp=True), NEG_FREE)
def test_neg_free_conservativity_step(m, f):
    s = star(m, atoms=("p", "q"))
    for w in m.worlds:
        if evaluate(m, w, f).neg > 0:
            assert evaluate(s, w, f).pos < 1


@settings(max_examples=50)
@given(models(), )
def test_constructions_refute_exactly(m):
    frame = m.frame()
    rep = frame_report(frame)
    if not rep.crisp_plus:
        cm, w, formula = crispness_countermodel(frame, "+")
        assert Evaluator(cm)(formula, w) != DESIGNATED
    if not rep.crisp_minus:
        cm, w, formula = crispness_countermodel(frame, "-")
        assert Evaluator(cm)(formula, w) != DESIGNATED
    if not rep.mono_relational:
        cm, w = mono_countermodel(frame)
        assert Evaluator(cm)(MONO_FORMULA, w) != DESIGNATED
