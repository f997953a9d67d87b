"""JSON documents for algebras and related objects.

Every document is an object with a ``schema`` tag and a ``field`` descriptor.
Scalars are strings in the field's text form; arrays use 0-based indices.
Canonical output (sorted keys, two-space indent, trailing newline) makes
``dumps(loads(text)) == text`` for canonical inputs.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import AlgebraSC, HomAlgebra, LinearMap, as_hom
from .bialgebra import Coproduct
from .bimodules import BilinearForm, Bimodule
from .errors import AlgebraError, ParseError
from .matched_pairs import MatchedPair
from .scalars import FieldContext, field_from_descriptor

SCHEMAS = ("algebra", "hom-algebra", "bimodule", "matched-pair", "coproduct", "form", "report")


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    schema = doc.get("schema")
    if schema not in SCHEMAS:
        raise ParseError(f"unknown or missing schema {schema!r}", path="schema")
    return doc


def _fmt(ctx: FieldContext, arr):
    return ctx.format_array(np.asarray(arr))


def _parse_array(ctx: FieldContext, data, shape, path: str) -> np.ndarray:
    """Parse nested lists of scalar strings, checking the exact shape."""

    def walk(node, dims, where):
        if not dims:
            if isinstance(node, bool) or not isinstance(node, (str, int)):
                raise ParseError(f"expected a scalar string, got {type(node).__name__}", path=where)
            try:
                return ctx.scalar(node)
            except (ValueError, ZeroDivisionError, AlgebraError) as exc:
                raise ParseError(f"bad scalar {node!r}: {exc}", path=where) from None
        if not isinstance(node, list):
            raise ParseError("expected an array", path=where)
        if dims[0] is not None and len(node) != dims[0]:
            raise ParseError(f"expected {dims[0]} entries, got {len(node)}", path=where)
        return [walk(v, dims[1:], f"{where}[{i}]") for i, v in enumerate(node)]

    values = walk(data, list(shape), path)
    out = ctx.array(values) if values else ctx.zeros(tuple(0 if d is None else d for d in shape))
    return out


def _dim_of(data, path) -> int:
    if not isinstance(data, list) or not data:
        raise ParseError("expected a non-empty array", path=path)
    return len(data)


def _field(doc) -> FieldContext:
    if "field" not in doc:
        raise ParseError("missing field descriptor", path="field")
    return field_from_descriptor(doc["field"])


def _need(doc, key, where=""):
    if key not in doc:
        raise ParseError(f"missing key {key!r}", path=f"{where}{key}")
    return doc[key]


def _parse_hom_payload(ctx, payload, where):
    if not isinstance(payload, dict):
        raise ParseError("expected an object", path=where.rstrip("."))
    c_raw = _need(payload, "c", where)
    n = _dim_of(c_raw, f"{where}c")
    c = _parse_array(ctx, c_raw, (n, n, n), f"{where}c")
    alpha = None
    if payload.get("alpha") is not None:
        alpha = _parse_array(ctx, payload["alpha"], (n, n), f"{where}alpha")
    try:
        alg = AlgebraSC(ctx, c)
    except AlgebraError as exc:
        raise ParseError(str(exc), path=f"{where}c") from None
    return HomAlgebra(alg, None if alpha is None else LinearMap(ctx, alpha))


def _hom_payload(ctx, h: HomAlgebra, with_alpha=None) -> dict:
    out = {"c": _fmt(ctx, h.c)}
    if with_alpha or (with_alpha is None and not h.is_plain()):
        out["alpha"] = _fmt(ctx, h.alpha.matrix)
    return out


# --- per-schema parse ---------------------------------------------------------------


def parse_algebra(doc) -> HomAlgebra:
    """``algebra`` or ``hom-algebra`` documents; plain algebras get identity alpha."""
    if doc.get("schema") not in ("algebra", "hom-algebra"):
        raise ParseError(f"expected an algebra document, got {doc.get('schema')!r}", path="schema")
    ctx = _field(doc)
    h = _parse_hom_payload(ctx, doc, "")
    if doc["schema"] == "hom-algebra" and "alpha" not in doc:
        raise ParseError("hom-algebra document needs alpha", path="alpha")
    return h


def parse_matrix(ctx: FieldContext, data, n: int, path="alpha") -> LinearMap:
    return LinearMap(ctx, _parse_array(ctx, data, (n, n), path))


def parse_bimodule(doc) -> Bimodule:
    ctx = _field(doc)
    base = _parse_hom_payload(ctx, _need(doc, "base"), "base.")
    n = base.n
    l_raw = _need(doc, "l")
    m = _dim_of(l_raw[0] if isinstance(l_raw, list) and l_raw else None, "l[0]")
    l = _parse_array(ctx, l_raw, (n, m, m), "l")
    r = _parse_array(ctx, _need(doc, "r"), (n, m, m), "r")
    phi = None if doc.get("phi") is None else _parse_array(ctx, doc["phi"], (m, m), "phi")
    return Bimodule(base, l, r, phi)


def parse_matched_pair(doc) -> MatchedPair:
    ctx = _field(doc)
    A = _parse_hom_payload(ctx, _need(doc, "A"), "A.")
    B = _parse_hom_payload(ctx, _need(doc, "B"), "B.")
    n, m = A.n, B.n
    return MatchedPair(
        A,
        B,
        _parse_array(ctx, _need(doc, "lA"), (n, m, m), "lA"),
        _parse_array(ctx, _need(doc, "rA"), (n, m, m), "rA"),
        _parse_array(ctx, _need(doc, "lB"), (m, n, n), "lB"),
        _parse_array(ctx, _need(doc, "rB"), (m, n, n), "rB"),
    )


def parse_coproduct(doc) -> Coproduct:
    ctx = _field(doc)
    d_raw = _need(doc, "d")
    n = _dim_of(d_raw, "d")
    return Coproduct(ctx, _parse_array(ctx, d_raw, (n, n, n), "d"))


def parse_form(doc) -> BilinearForm:
    ctx = _field(doc)
    raw = _need(doc, "matrix")
    n = _dim_of(raw, "matrix")
    try:
        return BilinearForm(ctx, _parse_array(ctx, raw, (n, n), "matrix"))
    except ValueError as exc:
        raise ParseError(str(exc), path="matrix") from None


_PARSERS = {
    "algebra": parse_algebra,
    "hom-algebra": parse_algebra,
    "bimodule": parse_bimodule,
    "matched-pair": parse_matched_pair,
    "coproduct": parse_coproduct,
    "form": parse_form,
}


def parse_document(doc):
    """Object for any non-report document."""
    schema = doc.get("schema")
    if schema == "report":
        return doc
    return _PARSERS[schema](doc)


# --- serialize ----------------------------------------------------------------------


def algebra_doc(a) -> dict:
    """``algebra`` document, or ``hom-algebra`` when the twist is not the identity."""
    h = as_hom(a)
    ctx = h.ctx
    schema = "algebra" if h.is_plain() else "hom-algebra"
    doc = {"schema": schema, "field": ctx.descriptor()}
    doc.update(_hom_payload(ctx, h, with_alpha=schema == "hom-algebra"))
    return doc


def bimodule_doc(b: Bimodule) -> dict:
    ctx = b.ctx
    doc = {
        "schema": "bimodule",
        "field": ctx.descriptor(),
        "base": _hom_payload(ctx, b.base),
        "l": _fmt(ctx, b.l),
        "r": _fmt(ctx, b.r),
    }
    if not b.is_plain():
        doc["phi"] = _fmt(ctx, b.phi)
    return doc


def matched_pair_doc(mp: MatchedPair) -> dict:
    ctx = mp.ctx
    return {
        "schema": "matched-pair",
        "field": ctx.descriptor(),
        "A": _hom_payload(ctx, mp.A),
        "B": _hom_payload(ctx, mp.B),
        "lA": _fmt(ctx, mp.lA),
        "rA": _fmt(ctx, mp.rA),
        "lB": _fmt(ctx, mp.lB),
        "rB": _fmt(ctx, mp.rB),
    }


def coproduct_doc(cp: Coproduct) -> dict:
    return {"schema": "coproduct", "field": cp.ctx.descriptor(), "d": _fmt(cp.ctx, cp.d)}


def form_doc(form: BilinearForm) -> dict:
    return {"schema": "form", "field": form.ctx.descriptor(), "matrix": _fmt(form.ctx, form.matrix)}


def report_doc(ctx: FieldContext | None, report: dict, sidecar: dict | None = None) -> dict:
    doc = {"schema": "report", "report": report}
    if ctx is not None:
        doc["field"] = ctx.descriptor()
    if sidecar:
        doc["sidecar"] = sidecar
    return doc


def to_document(obj) -> dict:
    if isinstance(obj, (AlgebraSC, HomAlgebra)):
        return algebra_doc(obj)
    if isinstance(obj, Bimodule):
        return bimodule_doc(obj)
    if isinstance(obj, MatchedPair):
        return matched_pair_doc(obj)
    if isinstance(obj, Coproduct):
        return coproduct_doc(obj)
    if isinstance(obj, BilinearForm):
        return form_doc(obj)
    if isinstance(obj, dict) and obj.get("schema") == "report":
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def canonical(doc: dict) -> str:
    """Canonical text, ignoring any ``sidecar`` (timing and similar)."""
    return dumps({k: v for k, v in doc.items() if k != "sidecar"})


def roundtrip(text: str) -> str:
    """Parse then re-serialise a document."""
    return dumps(to_document(parse_document(loads(text))))


def read_text(path: str) -> str:
    import sys

    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def load_file(path: str):
    return parse_document(loads(read_text(path)))
