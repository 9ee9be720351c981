"""Command-line front end.

Machine-readable output (one JSON document, or DOT text with ``--format
dot``) goes to stdout; a one-line human summary and any trace go to stderr.

Exit codes: 0 verdict computed, 2 parse or usage error, 3 resource limit,
4 malformed input file, 5 internal self-check failure.
"""

from __future__ import annotations

import argparse
import sys

from . import frames, labelled, oracle, reductions, tableau
from .modelio import MalformedDocument, dumps, fmt_value, load_model, model_to_doc, model_to_dot
from .semantics import Evaluator, UnknownWorld
from .syntax import ParseError, parse

EXIT_OK, EXIT_USAGE, EXIT_LIMIT, EXIT_INPUT, EXIT_INTERNAL = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _pair(value) -> list:
    return [fmt_value(value.pos), fmt_value(value.neg)]


def _limits(args) -> tableau.Limits:
    for name in ("max_states", "max_constraints", "time_budget"):
        if getattr(args, name) <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    return tableau.Limits(args.max_states, args.max_constraints, args.time_budget)


def _model_out(args, doc_fields: dict, model, root) -> str:
    if args.format == "dot":
        return model_to_dot(model, root)
    doc = dict(doc_fields)
    doc.update(model_to_doc(model))
    return dumps(doc)


def _emit_trace(args, lines) -> None:
    if args.trace:
        for line in lines:
            print(line, file=sys.stderr)


# ---------------------------------------------------------------- commands

def cmd_prove(args):
    f = parse(args.formula)
    res = tableau.prove_valid(f, _limits(args), trace=args.trace)
    _emit_trace(args, res.trace)
    if res:
        return dumps({"verdict": "Valid", "formula": str(f)}), f"Valid ({res.states} rule applications)"
    fields = {"verdict": "Invalid", "formula": str(f), "world": res.world, "side": res.side,
              "value": _pair(res.value)}
    summary = f"Invalid: side {res.side} fails at {res.world} with value {res.value}"
    return _model_out(args, fields, res.model, res.world), summary


def cmd_sat(args):
    f = parse(args.formula)
    res = tableau.check_sat(f, _limits(args), trace=args.trace)
    _emit_trace(args, res.trace)
    if not res:
        return dumps({"verdict": "Unsat", "formula": str(f)}), "Unsat"
    fields = {"verdict": "Sat", "formula": str(f), "world": res.world}
    return _model_out(args, fields, res.model, res.world), f"Sat at {res.world}"


def cmd_eval(args):
    f = parse(args.formula)
    model = load_model(args.model)
    try:
        value = Evaluator(model)(f, args.world)
    except UnknownWorld as exc:
        raise UsageError(f"unknown world {args.world!r}") from exc
    doc = {"formula": str(f), "world": args.world, "value": str(value),
           "pos": fmt_value(value.pos), "neg": fmt_value(value.neg)}
    return dumps(doc), str(value)


def cmd_oracle(args):
    f = parse(args.formula)
    if args.max_worlds < 1 or args.denominator < 1:
        raise UsageError("--max-worlds and --denominator must be positive")
    if args.mode == "valid":
        res = oracle.oracle_valid(f, args.max_worlds, args.denominator, budget=args.budget)
        if res:
            return dumps({"verdict": "Confirmed", "formula": str(f), "searched": res.searched}), \
                "Confirmed (no countermodel in the grid)"
        fields = {"verdict": "Countermodel", "formula": str(f), "world": res.world,
                  "value": _pair(res.value)}
        return _model_out(args, fields, res.model, res.world), f"Countermodel at {res.world}"
    res = oracle.oracle_sat(f, args.max_worlds, args.denominator, budget=args.budget)
    if not res:
        return dumps({"verdict": "NotFound", "formula": str(f), "searched": res.searched}), "NotFound"
    fields = {"verdict": "Sat", "formula": str(f), "world": res.world}
    return _model_out(args, fields, res.model, res.world), f"Sat at {res.world}"


def cmd_labelled(args):
    f = parse(args.formula)
    if args.denominator < 1:
        raise UsageError("--denominator must be positive")
    res = labelled.labelled_solve(f, args.denominator, _limits(args))
    if not res:
        return dumps({"verdict": "NoModelInGrid", "formula": str(f), "peak_live": res.peak_live}), \
            "NoModelInGrid"
    fields = {"verdict": "SatInGrid", "formula": str(f), "world": res.world, "peak_live": res.peak_live}
    return _model_out(args, fields, res.model, res.world), "SatInGrid"


_TRANSFORMS = {
    "nabla": reductions.nabla_transform,
    "triangle": reductions.triangle_transform,
    "sat2fal": lambda f: reductions.sat_falsif_reduce(f, reductions.SAT_TO_FALSIF),
    "fal2sat": lambda f: reductions.sat_falsif_reduce(f, reductions.FALSIF_TO_SAT),
    "complement": reductions.complement,
}


def cmd_transform(args):
    f = parse(args.formula)
    try:
        out = _TRANSFORMS[args.kind](f)
    except reductions.IllegalConnective as exc:
        raise UsageError(str(exc)) from exc
    return dumps({"transform": args.kind, "input": str(f), "formula": str(out)}), str(out)


def _report_doc(rep: frames.FramePropertyReport) -> dict:
    def wit(v):
        w, u, val = v
        vals = [fmt_value(x) for x in val] if isinstance(val, tuple) else fmt_value(val)
        return {"edge": [w, u], "value": vals}

    return {"crisp_plus": rep.crisp_plus, "crisp_minus": rep.crisp_minus,
            "mono_relational": rep.mono_relational, "finitely_branching": rep.finitely_branching,
            "witnesses": {k: wit(v) for k, v in rep.witnesses.items()}}


def cmd_frame(args):
    frame = load_model(args.frame, frame=True)
    if args.action == "check":
        if args.samples < 0:
            raise UsageError("--samples must be non-negative")
        suite = frames.definability_suite(frame, args.samples, args.seed)
        doc = _report_doc(suite.properties)
        doc["suite"] = {"seed": args.seed, "samples": args.samples, "checks": [
            {"name": c.name, "formula": str(c.formula), "property_holds": c.property_holds,
             "violations": len(c.violations)} for c in suite.checks]}
        return dumps(doc), suite.text().rstrip("\n")
    if args.kind is None:
        raise UsageError("frame countermodel needs crisp+, crisp- or mono")
    edge = None
    if args.edge:
        parts = args.edge.split(",")
        if len(parts) != 2:
            raise UsageError("--edge takes w,w'")
        edge = (parts[0].strip(), parts[1].strip())
    if args.kind == "mono":
        model, w = frames.mono_countermodel(frame, edge)
        formula = frames.MONO_FORMULA
    else:
        model, w, formula = frames.crispness_countermodel(frame, args.kind[-1], edge)
    value = Evaluator(model)(formula, w)
    fields = {"formula": str(formula), "world": w, "value": _pair(value)}
    return _model_out(args, fields, model, w), f"{formula} takes {value} at {w}"


def cmd_model(args):
    model = load_model(args.model)
    if args.action == "star":
        out = frames.star(model)
        return _model_out(args, {}, out, None), "star model"
    out, corr = frames.split(model)
    if args.format == "dot":
        return model_to_dot(out), "split model"
    doc = model_to_doc(out)
    doc["correspondence"] = corr
    return dumps(doc), f"split model with {len(out.worlds)} worlds"


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kg2pm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def limits(sp, states=10_000):
        sp.add_argument("--max-states", type=int, default=states)
        sp.add_argument("--max-constraints", type=int, default=5_000)
        sp.add_argument("--time-budget", type=float, default=60.0, help="seconds")

    def fmt(sp):
        sp.add_argument("--format", choices=("json", "dot"), default="json")

    for name, fn, helptext in (("prove", cmd_prove, "decide validity"),
                               ("sat", cmd_sat, "decide (1,0)-satisfiability")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("formula")
        limits(sp)
        fmt(sp)
        sp.add_argument("--trace", action="store_true", help="rule applications on stderr")
        sp.set_defaults(func=fn)

    sp = sub.add_parser("eval", help="evaluate a formula on a model")
    sp.add_argument("formula")
    sp.add_argument("--model", required=True)
    sp.add_argument("--world", required=True)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("oracle", help="brute-force grid search")
    sp.add_argument("mode", choices=("valid", "sat"))
    sp.add_argument("formula")
    sp.add_argument("--max-worlds", type=int, default=2)
    sp.add_argument("--denominator", type=int, default=2)
    sp.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET)
    fmt(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("labelled", help="labelled-value solver on a grid")
    sp.add_argument("formula")
    sp.add_argument("--denominator", type=int, default=2)
    limits(sp, states=labelled.DEFAULT_LIMITS.max_states)
    fmt(sp)
    sp.set_defaults(func=cmd_labelled)

    sp = sub.add_parser("transform", help="formula transforms")
    sp.add_argument("kind", choices=sorted(_TRANSFORMS))
    sp.add_argument("formula")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("frame", help="frame properties and countermodels")
    sp.add_argument("action", choices=("check", "countermodel"))
    sp.add_argument("kind", nargs="?", choices=("crisp+", "crisp-", "mono"))
    sp.add_argument("--frame", required=True)
    sp.add_argument("--edge")
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    fmt(sp)
    sp.set_defaults(func=cmd_frame)

    sp = sub.add_parser("model", help="model constructions")
    sp.add_argument("action", choices=("split", "star"))
    sp.add_argument("--model", required=True)
    fmt(sp)
    sp.set_defaults(func=cmd_model)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "func", None) is None:
            raise UsageError("a subcommand is required")
        out, summary = args.func(args)
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (tableau.LimitExceeded, oracle.BudgetExceeded) as exc:
        print(f"limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (MalformedDocument, OSError, UnknownWorld, frames.NotCrisp,
            frames.EdgeNotFractional, frames.EdgeNotDiffering) as exc:
        print(f"input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except tableau.InternalError as exc:
        print(f"internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(out)
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
