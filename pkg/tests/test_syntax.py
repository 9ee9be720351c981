import pytest
from hypothesis import given

from kg2pm.syntax import (
    BOT, TOP, And, Atom, Box, Coimpl, Delta, Dia, GNeg, Impl, Neg, Or,
    ParseError, desugar, is_core, modal_metrics, parse, size, subformulas, to_text,
)

from conftest import formulas

p, q = Atom("p"), Atom("q")


@pytest.mark.parametrize("text, expected", [
    ("p -> p", Impl(p, p)),
    ("[]p -> []!<>p", Impl(Box(p), Box(Neg(Dia(p))))),
    ("~~<>p", GNeg(GNeg(Dia(p)))),
    ("p -> q -> p", Impl(p, Impl(q, p))),
    ("p -< q -< p", Coimpl(Coimpl(p, q), p)),
    ("p & q | p", Or(And(p, q), p)),
    ("p | q -< p -> q", Impl(Coimpl(Or(p, q), p), q)),
    ("^!p", Delta(Neg(p))),
    ("  ( p )  ", p),
    ("0 -> 1", Impl(BOT, TOP)),
    ("foo_Bar9", Atom("foo_Bar9")),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("f, text", [
    (Impl(p, p), "p -> p"),
    (Coimpl(TOP, p), "1 -< p"),
    (Box(Neg(Dia(p))), "[]!<>p"),
    (Impl(Impl(p, q), p), "(p -> q) -> p"),
    (Coimpl(p, Coimpl(q, p)), "p -< (q -< p)"),
    (Neg(And(p, q)), "!(p & q)"),
])
def test_print(f, text):
    assert to_text(f) == text


@pytest.mark.parametrize("text, offset, expected", [
    ("p ->", 4, {"ATOM", "(", "!"}),
    ("(p", 2, {")"}),
    ("p q", 2, {"EOF", "&"}),
    ("P", 0, {"ATOM"}),
    ("p $ q", 2, {"ATOM"}),
])
def test_parse_errors(text, offset, expected):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset
    assert expected <= info.value.expected


def test_parse_error_offset_is_in_bytes():
    with pytest.raises(ParseError) as info:
        parse("p & é")
    assert info.value.offset == 4


def test_desugar_examples():
    assert desugar(Or(p, q)) == Neg(And(Neg(p), Neg(q)))
    assert desugar(GNeg(p)) == Impl(p, BOT)
    assert desugar(Coimpl(p, q)) == Neg(Impl(Neg(q), Neg(p)))
    one_minus = Neg(Impl(Neg(p), Neg(TOP)))
    assert desugar(Delta(p)) == Neg(Impl(Neg(one_minus), Neg(TOP)))


def test_subformulas_post_order():
    assert subformulas(p) == [p]
    assert subformulas(Impl(p, q)) == [p, q, Impl(p, q)]
    assert subformulas(Box(Neg(p))) == [p, Neg(p), Box(Neg(p))]
    assert subformulas(And(p, p)) == [p, And(p, p)]


@pytest.mark.parametrize("text, metrics", [
    ("p -> p", (0, 0)), ("[]p -> []!<>p", (3, 2)), ("<>p", (1, 1)),
    ("^[]p", (1, 1)), ("[]<>[]p | <>p", (4, 3)),
])
def test_modal_metrics(text, metrics):
    assert modal_metrics(parse(text)) == metrics


@given(formulas(8))
def test_round_trip(f):
    assert parse(to_text(f)) == f


@given(formulas(8))
def test_desugar_idempotent_and_core(f):
    d = desugar(f)
    assert is_core(d)
    assert desugar(d) == d


@given(formulas(8))
def test_subformulas_closed_under_children(f):
    subs = subformulas(desugar(f))
    seen = set()
    for g in subs:
        for attr in ("arg", "left", "right"):
            child = getattr(g, attr, None)
            if child is not None:
                assert child in seen
        seen.add(g)
    assert len(set(subs)) == len(subs) <= size(desugar(f))
