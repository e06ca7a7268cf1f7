"""JSON instance files.

Product-vector sets::

    {"field": {"kind": "prime_field", "p": 2}, "dims": [2, 2],
     "vectors": [[[1, 0], [0, 1]], ...]}

Dense tensors use ``"entries"`` (row-major, mode 1 slowest) instead of
``"vectors"``; a pair of tensors uses ``"tensors": [entries, entries]``.
Chain problems are ``{"n": 4, "S": [[1, 2], [3, 4]], "T": [[1], [2, 3], [4]]}``.
Index sets are 1-based in every file.  Prime-field coordinates are written
as integers, rationals as ``"num/den"`` strings.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import KruskalLabError, ParseError, SchemaError, ZeroFactor
from .linalg import FieldSpec
from .tensors import DenseTensor, ModeSignature, ProductVector, ProductVectorSet
from .zerosum import ChainProblem


def field_to_json(F: FieldSpec) -> dict:
    return {"kind": "rationals"} if F.p is None else {"kind": "prime_field", "p": F.p}


def field_from_json(doc: Any) -> FieldSpec:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError("field must be an object with a 'kind'", location="field")
    try:
        if doc["kind"] == "rationals":
            return FieldSpec.rationals()
        return FieldSpec(doc["kind"], doc.get("p"))
    except KruskalLabError as exc:
        raise SchemaError(str(exc), location="field") from None


def _scalar_to_json(F: FieldSpec, x):
    return int(x) if F.is_finite else str(Fraction(x))


def _scalar_from_json(F: FieldSpec, raw, where: str):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise SchemaError(f"scalar must be an integer or string, got {raw!r}", location=where)
    try:
        return F(raw)
    except (ParseError, ZeroDivisionError, ValueError) as exc:
        raise SchemaError(f"bad scalar {raw!r}: {exc}", location=where) from None


def product_vector_to_json(x: ProductVector) -> list[list]:
    F = x.field
    return [[_scalar_to_json(F, v) for v in f] for f in x.factors]


def instance_to_json(s: ProductVectorSet) -> dict:
    return {
        "field": field_to_json(s.field),
        "dims": list(s.signature.dims),
        "vectors": [product_vector_to_json(x) for x in s],
    }


def tensor_to_json(t: DenseTensor) -> dict:
    F = t.field
    return {
        "field": field_to_json(F),
        "dims": list(t.signature.dims),
        "entries": [_scalar_to_json(F, v) for v in t.entries],
    }


def _signature(doc: dict) -> ModeSignature:
    F = field_from_json(doc.get("field"))
    dims = doc.get("dims")
    if (not isinstance(dims, list) or not dims
            or any(isinstance(d, bool) or not isinstance(d, int) or d < 1 for d in dims)):
        raise SchemaError("dims must be a nonempty list of positive integers", location="dims")
    try:
        return ModeSignature(tuple(dims), F)
    except KruskalLabError as exc:
        raise SchemaError(str(exc), location="dims") from None


def _entries(sig: ModeSignature, raw, where: str) -> DenseTensor:
    if not isinstance(raw, list) or len(raw) != sig.size:
        raise SchemaError(f"need {sig.size} entries", location=where)
    values = tuple(_scalar_from_json(sig.field, v, f"{where}[{k}]") for k, v in enumerate(raw))
    return DenseTensor(sig, values)


def instance_from_json(doc: Any) -> ProductVectorSet | DenseTensor | list[DenseTensor]:
    """Build the object a document describes; errors carry a location."""
    if not isinstance(doc, dict):
        raise SchemaError("instance must be a JSON object", location="$")
    sig = _signature(doc)
    kinds = [k for k in ("vectors", "entries", "tensors") if k in doc]
    if len(kinds) != 1:
        raise SchemaError("exactly one of 'vectors', 'entries', 'tensors' is required", location="$")
    if kinds[0] == "entries":
        return _entries(sig, doc["entries"], "entries")
    if kinds[0] == "tensors":
        raw = doc["tensors"]
        if not isinstance(raw, list) or not raw:
            raise SchemaError("'tensors' must be a nonempty list", location="tensors")
        return [_entries(sig, t, f"tensors[{i}]") for i, t in enumerate(raw)]
    raw = doc["vectors"]
    if not isinstance(raw, list) or not raw:
        raise SchemaError("'vectors' must be a nonempty list", location="vectors")
    vectors = []
    for a, factors in enumerate(raw):
        if not isinstance(factors, list) or len(factors) != sig.m:
            raise SchemaError(f"vector {a + 1} needs {sig.m} factors", location=f"vectors[{a}]")
        parsed = []
        for j, (f, d) in enumerate(zip(factors, sig.dims)):
            where = f"vectors[{a}][{j}]"
            if not isinstance(f, list) or len(f) != d:
                raise SchemaError(f"factor needs {d} coordinates", location=where)
            parsed.append(tuple(_scalar_from_json(sig.field, v, f"{where}[{i}]") for i, v in enumerate(f)))
        if any(not any(f) for f in parsed):
            j = next(j for j, f in enumerate(parsed) if not any(f))
            raise ZeroFactor(f"vector {a + 1} has a zero factor in mode {j + 1}",
                             location={"vector": a + 1, "mode": j + 1})
        vectors.append(ProductVector(sig, tuple(parsed)))
    return ProductVectorSet(sig, tuple(vectors))


def chain_problem_from_json(doc: Any) -> ChainProblem:
    if not isinstance(doc, dict) or not {"n", "S", "T"} <= doc.keys():
        raise SchemaError("chain problem needs 'n', 'S' and 'T'", location="$")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise SchemaError("'n' must be a positive integer", location="n")
    families = []
    for key in ("S", "T"):
        fam = doc[key]
        if not isinstance(fam, list) or not fam:
            raise SchemaError(f"'{key}' must be a nonempty list of index lists", location=key)
        blocks = []
        for k, b in enumerate(fam):
            if not isinstance(b, list) or any(isinstance(i, bool) or not isinstance(i, int) for i in b):
                raise SchemaError("blocks are lists of 1-based integers", location=f"{key}[{k}]")
            blocks.append(frozenset(i - 1 for i in b))
        families.append(tuple(blocks))
    return ChainProblem(n, families[0], families[1])


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", location=str(path)) from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8", location=str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc.msg}", location={"line": exc.lineno, "column": exc.colno}) from None


def parse_instance(path: str | Path) -> ProductVectorSet | DenseTensor | list[DenseTensor]:
    return instance_from_json(load_json(path))


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
