"""Proof search with the constraint tableau, and reading off countermodels."""
from kg2pm.modelio import model_to_dot
from kg2pm.semantics import Evaluator, model_depth
from kg2pm.syntax import modal_metrics, parse
from kg2pm.tableau import check_sat, prove_valid

for text in ("p -> p", "[](p -> q) -> ([]p -> []q)", "<>(p | q) -> (<>p | <>q)", "[]p -> []!<>p"):
    res = prove_valid(text)
    print(f"{text:28} {'Valid' if res else 'Invalid'}")

# a countermodel, with its evaluator check
f = parse("[]p -> []!<>p")
res = prove_valid(f, trace=True)
print("\n".join(res.trace[:8]), "\n...")
print("side", res.side, "value", Evaluator(res.model)(f, res.world))
k, depth = modal_metrics(f)
print(f"{len(res.model.worlds)} worlds (bound {k ** (k + 1)}), depth {model_depth(res.model, res.world)} (bound {depth})")
print(model_to_dot(res.model, res.world))

# satisfiability means reaching (1, 0) somewhere
for text in ("p & !p", "p & ~p", "<>p & []~p"):
    res = check_sat(text)
    print(f"{text:12} {'Sat' if res else 'Unsat'}")
