"""JSON documents for models, frames and classical models.

Model document::

    {"worlds": ["w0", "w1"],
     "rplus":  [["w0", "w1", "1/2"]],
     "rminus": [],
     "v1": {"p": {"w1": "3/5"}},
     "v2": {"p": {"w1": "1/4"}}}

Values are strings ``"n"`` or ``"n/d"`` in lowest terms; absent entries mean
0.  Dumping is canonical (worlds in model order, zero entries omitted), so a
canonical document survives a load/dump round trip byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .semantics import Model


class MalformedDocument(ValueError):
    pass


def fmt_value(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def parse_value(text) -> Fraction:
    if not isinstance(text, str):
        raise MalformedDocument(f"value must be a string 'n' or 'n/d', got {text!r}")
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedDocument(f"bad value {text!r}") from exc
    if fmt_value(v) != text.strip():
        raise MalformedDocument(f"value {text!r} is not in lowest terms")
    if not 0 <= v <= 1:
        raise MalformedDocument(f"value {text!r} outside [0, 1]")
    return v


def model_to_doc(model: Model, *, frame: bool = False) -> dict:
    order = {w: i for i, w in enumerate(model.worlds)}

    def triples(table):
        items = sorted(table.items(), key=lambda kv: (order[kv[0][0]], order[kv[0][1]]))
        return [[str(a), str(b), fmt_value(v)] for (a, b), v in items if v]

    def valuation(table):
        out: dict = {}
        for atom in sorted({a for a, _ in table}):
            row = {str(w): fmt_value(table[atom, w]) for w in model.worlds
                   if table.get((atom, w))}
            if row:
                out[atom] = row
        return out

    doc = {"worlds": [str(w) for w in model.worlds],
           "rplus": triples(model.rplus),
           "rminus": triples(model.rminus)}
    if not frame:
        doc["v1"] = valuation(model.v1)
        doc["v2"] = valuation(model.v2)
    return doc


def doc_to_model(doc, *, frame: bool = False) -> Model:
    if not isinstance(doc, dict):
        raise MalformedDocument("model document must be a JSON object")
    worlds = doc.get("worlds")
    if not isinstance(worlds, list) or not worlds or not all(isinstance(w, str) for w in worlds):
        raise MalformedDocument("'worlds' must be a non-empty list of labels")
    if len(set(worlds)) != len(worlds):
        raise MalformedDocument("duplicate world labels")
    ws = set(worlds)

    def rel(name):
        out = {}
        for item in doc.get(name, []):
            if not (isinstance(item, list) and len(item) == 3):
                raise MalformedDocument(f"{name} entries must be [from, to, value]")
            a, b, v = item
            if a not in ws or b not in ws:
                raise MalformedDocument(f"{name} refers to unknown world in {item!r}")
            if (a, b) in out:
                raise MalformedDocument(f"duplicate {name} entry for {a}->{b}")
            out[a, b] = parse_value(v)
        return out

    def valuation(name):
        out = {}
        table = doc.get(name, {})
        if not isinstance(table, dict):
            raise MalformedDocument(f"'{name}' must map atoms to world maps")
        for atom, row in table.items():
            if not isinstance(row, dict):
                raise MalformedDocument(f"'{name}.{atom}' must map worlds to values")
            for w, v in row.items():
                if w not in ws:
                    raise MalformedDocument(f"{name}.{atom} refers to unknown world {w!r}")
                out[atom, w] = parse_value(v)
        return out

    if frame:
        return Model(worlds, rel("rplus"), rel("rminus"))
    return Model(worlds, rel("rplus"), rel("rminus"), valuation("v1"), valuation("v2"))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_model(path, *, frame: bool = False) -> Model:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: {exc}") from exc
    return doc_to_model(doc, frame=frame)


def save_model(model: Model, path, *, frame: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(model_to_doc(model, frame=frame)))


def model_to_dot(model: Model, root=None) -> str:
    """Graphviz text: worlds annotated with atom values, edges ``+:v`` / ``-:v``."""
    lines = ["digraph model {"]
    atoms = sorted({a for a, _ in model.v1} | {a for a, _ in model.v2})
    for w in model.worlds:
        vals = ", ".join(
            f"{a}=({fmt_value(model.val(1, a, w))},{fmt_value(model.val(2, a, w))})" for a in atoms)
        shape = ' shape=doublecircle' if w == root else ''
        label = f"{w}\\n{vals}" if vals else str(w)
        lines.append(f'  "{w}" [label="{label}"{shape}];')
    for sign, table in (("+", model.rplus), ("-", model.rminus)):
        for (a, b), v in table.items():
            lines.append(f'  "{a}" -> "{b}" [label="{sign}:{fmt_value(v)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
