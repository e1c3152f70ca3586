"""JSON documents for contexts, elements, module specs and vectors.

Scalars are stored as their canonical text (``"1/2"``, ``"1-sqrt(2)"``)
so documents round-trip exactly.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from ..gamma import GroupContext, point_key
from ..repmod import MatrixTuple, ModuleSpec, ModuleVector, direct_sum
from ..scalars import parse_scalar
from ..weyl import AlgebraElement, ExtendedElement

CONTEXT_ENV = "WEYLTYPE_CONTEXT"


def _pt(pt):
    return [str(x) for x in pt]


def _scalar(text, ctx):
    return parse_scalar(str(text), ctx.field)


def _point(data, ctx):
    return ctx.point([_scalar(x, ctx) for x in data])


def _check_ref(data, ctx):
    ref = data.get("ctx_ref")
    if ref is not None and ref != ctx.ref():
        raise ValueError(f"document was written for context {ref}, current context is {ctx.ref()}")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# -- context ---------------------------------------------------------------


def load_context(path=None) -> GroupContext:
    """Context from ``path``, else from the environment variable, else Z."""
    path = path or os.environ.get(CONTEXT_ENV)
    if not path:
        return GroupContext.integers(1)
    return GroupContext.from_json(read_json(Path(path)))


# -- elements ---------------------------------------------------------------


def element_to_json(x) -> dict:
    body, central = (x.body, x.central) if isinstance(x, ExtendedElement) else (x, None)
    doc = {
        "ctx_ref": body.ctx.ref(),
        "terms": [{"alpha": _pt(a), "mu": list(m), "coeff": str(c)} for (a, m), c in body.sorted_terms()],
    }
    if central is not None:
        doc["central"] = str(central)
    return doc


def element_from_json(data: dict, ctx: GroupContext):
    _check_ref(data, ctx)
    terms = {}
    for t in data["terms"]:
        key = (_point(t["alpha"], ctx), tuple(int(m) for m in t["mu"]))
        if key in terms:
            raise ValueError("repeated monomial")
        terms[key] = _scalar(t["coeff"], ctx)
    body = AlgebraElement(ctx, terms)
    if "central" in data:
        return ExtendedElement(body, _scalar(data["central"], ctx))
    return body


# -- module specs ---------------------------------------------------------------


def spec_to_json(spec: ModuleSpec, top: bool = True) -> dict:
    doc = {"ctx_ref": spec.ctx.ref()} if top else {}
    doc["kind"] = spec.kind
    if spec.kind in ("plain", "twisted"):
        doc["G"] = [[[str(x) for x in row] for row in g.rows] for g in spec.G]
    elif spec.kind == "trivial":
        doc["default"] = spec.dims.default
        doc["points"] = [{"beta": _pt(b), "dim": k} for b, k in spec.dims.points]
    else:
        doc["summands"] = [spec_to_json(s, top=False) for s in spec.summands]
    return doc


def spec_from_json(data: dict, ctx: GroupContext) -> ModuleSpec:
    _check_ref(data, ctx)
    kind = data["kind"]
    if kind in ("plain", "twisted"):
        G = MatrixTuple([[[_scalar(x, ctx) for x in row] for row in g] for g in data["G"]], ctx.field)
        return ModuleSpec(kind, ctx, G=G)
    if kind == "trivial":
        points = {tuple(_point(p["beta"], ctx)): int(p["dim"]) for p in data.get("points", [])}
        return ModuleSpec.trivial(ctx, int(data.get("default", 0)), points)
    if kind == "direct_sum":
        return direct_sum([spec_from_json(s, ctx) for s in data["summands"]])
    raise ValueError(f"unknown module kind {kind!r}")


# -- vectors -------------------------------------------------------------------


def vector_to_json(v: ModuleVector, ctx: GroupContext) -> dict:
    return {
        "ctx_ref": ctx.ref(),
        "entries": [{"beta": _pt(b), "index": i, "coeff": str(c)} for (b, i), c in v.sorted_entries()],
    }


def vector_from_json(data: dict, ctx: GroupContext) -> ModuleVector:
    _check_ref(data, ctx)
    entries = {}
    for e in data["entries"]:
        key = (_point(e["beta"], ctx), int(e["index"]))
        entries[key] = entries.get(key, ctx.field.zero) + _scalar(e["coeff"], ctx)
    return ModuleVector(entries, ctx.field)


def format_vector(v: ModuleVector) -> str:
    if v.is_zero():
        return "0"
    parts = []
    for (b, i), c in sorted(v.entries.items(), key=lambda kv: (point_key(kv[0][0]), kv[0][1])):
        name = f"y_({', '.join(map(str, b))})[{i}]"
        neg = c.a < 0 or (c.a == 0 and c.b < 0)
        mag = -c if neg else c
        text = name if mag == 1 else (f"{mag}*{name}" if mag.is_rational() or mag.a == 0 else f"({mag})*{name}")
        if not parts:
            parts.append("-" + text if neg else text)
        else:
            parts.append((" - " if neg else " + ") + text)
    return "".join(parts)
