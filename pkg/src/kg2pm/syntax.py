"""Formulas of the bi-Gödel modal language with De Morgan negation.

Concrete ASCII syntax, tightest binding first::

    !  ~  ^  []  <>          unary: De Morgan negation, Gödel negation,
                             Baaz Delta, box, diamond
    &                        conjunction (left-assoc)
    |                        disjunction (left-assoc)
    -<                       co-implication (left-assoc)
    ->                       implication (right-assoc)
    0  1                     constants
    p, q1, foo_bar           atoms: [a-z][a-zA-Z0-9_]*

Formulas are immutable, hashable dataclasses, so they can be used as
dictionary keys and compared structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

__all__ = [
    "Formula", "Atom", "Top", "Bot", "Neg", "GNeg", "Delta", "And", "Or",
    "Impl", "Coimpl", "Box", "Dia", "TOP", "BOT", "ParseError", "parse",
    "to_text", "desugar", "is_core", "subformulas", "modal_metrics", "atoms",
    "size", "iff",
]


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=True)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=True)
class Bot(Formula):
    pass


@dataclass(frozen=True, eq=True)
class Neg(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class GNeg(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class Delta(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class Box(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class Dia(Formula):
    arg: Formula


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Impl(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=True)
class Coimpl(Formula):
    left: Formula
    right: Formula


TOP = Top()
BOT = Bot()

UNARY = (Neg, GNeg, Delta, Box, Dia)
BINARY = (And, Or, Impl, Coimpl)
MODAL = (Box, Dia)
CORE = (Atom, Top, Bot, Neg, And, Impl, Box, Dia)

ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def iff(a: Formula, b: Formula) -> Formula:
    """Biconditional as the conjunction of both implications."""
    return And(Impl(a, b), Impl(b, a))


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    """Malformed formula text.

    ``offset`` is the byte offset of the offending token and ``expected`` the
    set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str]):
        self.offset = offset
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(self.expected))
        super().__init__(f"{message} at offset {offset} (expected one of: {exp})")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op>\[\]|<>|->|-<|[!~^&|()01])|(?P<atom>[a-z][a-zA-Z0-9_]*))"
)

_PRIMARY_START = frozenset({"!", "~", "^", "[]", "<>", "(", "0", "1", "ATOM"})
_UNARY_TOKENS = {"!": Neg, "~": GNeg, "^": Delta, "[]": Box, "<>": Dia}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    data = text.encode("utf-8")
    # Work on the decoded string but report byte offsets.
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            off = len(text[:pos].encode("utf-8"))
            raise ParseError(f"unexpected character {text[pos]!r}", off, _PRIMARY_START)
        kind = "ATOM" if m.group("atom") else m.group("op")
        start = m.start("atom") if m.group("atom") else m.start("op")
        tokens.append((kind, m.group("atom") or m.group("op"), len(text[:start].encode("utf-8"))))
        pos = m.end()
    tokens.append(("EOF", "", len(data)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def kind(self) -> str:
        return self.tokens[self.i][0]

    def fail(self, expected) -> None:
        kind, value, off = self.tokens[self.i]
        what = "end of input" if kind == "EOF" else repr(value)
        raise ParseError(f"unexpected {what}", off, frozenset(expected))

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        if self.kind != "EOF":
            self.fail({"->", "-<", "|", "&", "EOF"})
        return f

    def implication(self) -> Formula:
        left = self.coimplication()
        if self.kind == "->":
            self.advance()
            return Impl(left, self.implication())
        return left

    def coimplication(self) -> Formula:
        left = self.disjunction()
        while self.kind == "-<":
            self.advance()
            left = Coimpl(left, self.disjunction())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.kind == "|":
            self.advance()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.kind == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind = self.kind
        if kind in _UNARY_TOKENS:
            self.advance()
            return _UNARY_TOKENS[kind](self.unary())
        if kind == "ATOM":
            return Atom(self.advance()[1])
        if kind == "0":
            self.advance()
            return BOT
        if kind == "1":
            self.advance()
            return TOP
        if kind == "(":
            self.advance()
            f = self.implication()
            if self.kind != ")":
                self.fail({")", "->", "-<", "|", "&"})
            self.advance()
            return f
        self.fail(_PRIMARY_START)


def parse(text: str) -> Formula:
    """Parse ``text`` into a :class:`Formula`; raises :class:`ParseError`."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- printing

_PREC = {Impl: 1, Coimpl: 2, Or: 3, And: 4}
_UNARY_TEXT = {Neg: "!", GNeg: "~", Delta: "^", Box: "[]", Dia: "<>"}
_UNARY_PREC = 5


def _prec(f: Formula) -> int:
    return _PREC.get(type(f), _UNARY_PREC if isinstance(f, UNARY) else 6)


def to_text(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "1"
    if isinstance(f, Bot):
        return "0"
    if isinstance(f, UNARY):
        inner = to_text(f.arg)
        if _prec(f.arg) < _UNARY_PREC:
            inner = f"({inner})"
        return _UNARY_TEXT[type(f)] + inner
    op = {Impl: "->", Coimpl: "-<", Or: "|", And: "&"}[type(f)]
    p = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    if isinstance(f, Impl):
        # right-associative
        if _prec(f.left) <= p:
            left = f"({left})"
        if _prec(f.right) < p:
            right = f"({right})"
    else:
        if _prec(f.left) < p:
            left = f"({left})"
        if _prec(f.right) <= p:
            right = f"({right})"
    return f"{left} {op} {right}"


# ---------------------------------------------------------------- desugaring

def desugar(f: Formula) -> Formula:
    """Expand the defined connectives into Atom/Top/Bot/Neg/And/Impl/Box/Dia."""
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, (Neg, Box, Dia)):
        return type(f)(desugar(f.arg))
    if isinstance(f, (And, Impl)):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, GNeg):
        return Impl(desugar(f.arg), BOT)
    if isinstance(f, Or):
        return Neg(And(Neg(desugar(f.left)), Neg(desugar(f.right))))
    if isinstance(f, Coimpl):
        return _coimpl(desugar(f.left), desugar(f.right))
    if isinstance(f, Delta):
        return _coimpl(TOP, _coimpl(TOP, desugar(f.arg)))
    raise TypeError(f"not a formula: {f!r}")


def _coimpl(a: Formula, b: Formula) -> Formula:
    return Neg(Impl(Neg(b), Neg(a)))


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE) for g in _walk(f))


# ---------------------------------------------------------------- metrics

def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, UNARY):
        return (f.arg,)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    return ()


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(_children(g))


def subformulas(f: Formula) -> list[Formula]:
    """All distinct subtrees of ``f`` in post-order (children before parents)."""
    seen: dict[Formula, None] = {}

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for c in _children(g):
            visit(c)
        seen[g] = None

    visit(f)
    return list(seen)


def size(f: Formula) -> int:
    """Number of nodes of the parse tree."""
    return sum(1 for _ in _walk(f))


def atoms(f: Formula) -> list[str]:
    """Atom names of ``f``, sorted."""
    return sorted({g.name for g in _walk(f) if isinstance(g, Atom)})


def modal_metrics(f: Formula) -> tuple[int, int]:
    """(number of modal nodes, modal nesting depth) of the desugared formula."""
    core = desugar(f)
    count = sum(1 for g in _walk(core) if isinstance(g, MODAL))

    def depth(g: Formula) -> int:
        d = max((depth(c) for c in _children(g)), default=0)
        return d + 1 if isinstance(g, MODAL) else d

    return count, depth(core)


FormulaLike = Union[Formula, str]


def as_formula(f: FormulaLike) -> Formula:
    return parse(f) if isinstance(f, str) else f
