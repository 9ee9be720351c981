"""Model constructions, frame definability and the classical transforms."""
from fractions import Fraction as F

from kg2pm.frames import (
    CRISP_PLUS_FORMULA, crispness_countermodel, definability_suite, frame_report,
    mono_countermodel, split, star,
)
from kg2pm.reductions import embed_classical, k_countermodel_search, nabla_transform
from kg2pm.semantics import Evaluator, Model
from kg2pm.syntax import parse

f = parse("<>p -> []q")
m = Model(["a", "b"], {("a", "b"): 1}, {("a", "a"): 1},
          {("p", "b"): F(2, 3), ("q", "a"): 1}, {("q", "b"): F(1, 3)})

# star swaps the relations and flips values: (x, y) becomes (1 - y, 1 - x)
print("original", Evaluator(m)(f, "a"), " star", Evaluator(star(m, ["p", "q"]))(f, "a"))

# splitting unravels the frame into edge-labelled worlds without changing values
s, corr = split(m)
print("split worlds", s.worlds)
print("copies of a", {w: str(Evaluator(s)(f, w)) for w in corr["a"]})

# a frame with a fractional R+ edge, and the valuation that refutes ^[]p -> []^p
frame = Model(["w", "v"], {("w", "v"): F(1, 2)}, {("w", "v"): 1})
print(frame_report(frame))
cm, w, g = crispness_countermodel(frame, "+")
print(g, Evaluator(cm)(g, w))
cm, w = mono_countermodel(frame)
print("mono countermodel at", w, cm.v1)
print(definability_suite(frame, 50, seed=0).text())
print("crisp+ defining formula:", CRISP_PLUS_FORMULA)

# classical countermodels carry over through the nabla transform
res = k_countermodel_search("[]p -> p", 2)
phi = nabla_transform("[]p -> p")
print(phi, Evaluator(embed_classical(res.model))(phi, "w0"))
