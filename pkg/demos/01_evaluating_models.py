"""Evaluating formulas on a bi-relational fuzzy model.

Every formula gets a pair (support of truth, support of falsity).  A value is
designated only when it is (1, 0).
"""
from fractions import Fraction as F

from kg2pm.semantics import Evaluator, Model
from kg2pm.syntax import parse

# four worlds; R+ reaches w1 and w3, R- reaches w2 and w3
m = Model(
    ["w0", "w1", "w2", "w3"],
    {("w0", "w1"): 1, ("w0", "w3"): 1},
    {("w0", "w2"): 1, ("w0", "w3"): 1},
    {("p", "w1"): F(4, 5), ("p", "w2"): F(2, 5), ("p", "w3"): F(3, 5)},
    {("p", "w1"): F(1, 4), ("p", "w2"): F(3, 4), ("p", "w3"): F(2, 4)},
)
ev = Evaluator(m)

for text in ("[]p", "<>p", "!<>!p", "[]p -> <>p"):
    print(f"{text:14} {ev(parse(text), 'w0')}")

# the box is not the dual of the diamond here: compare []p with !<>!p above

# contradictions do not explode: p & !p can be (1/2, 1/2) while q is 0
c = Model(["w"], v1={("p", "w"): F(1, 2)}, v2={("p", "w"): F(1, 2)})
print("p & !p        ", Evaluator(c)(parse("p & !p"), "w"))
print("(p & !p) -> q ", Evaluator(c)(parse("(p & !p) -> q"), "w"))
