"""JSON model files.

A model file looks like::

    {
      "field": "Q",
      "generators": [{"name": "x1", "degree": 1}, ...],
      "differential": {"x3": "x1*x2"},
      "truncation": 4,
      "classes": {"alpha": "x1", "u": "x1*x4 + x2*x3"}
    }

``differential``, ``truncation`` and ``classes`` are optional (truncation
defaults to the total degree when every generator is odd).  Unknown keys are
rejected.  Output is UTF-8 JSON with a fixed key order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional

from .algebra import GeneratorDecl, GradedVector, Presentation
from .dga import DgaModel
from .errors import ParseError
from .fields import Field
from .polyparse import format_polynomial, parse_polynomial

__all__ = ["ModelFile", "loads", "load", "dumps", "from_model", "GREEK_ALIASES"]

_KEYS = ("field", "generators", "differential", "truncation", "classes")
_GEN_KEYS = ("name", "degree")

GREEK_ALIASES = {"α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "ξ": "xi"}


@dataclass
class ModelFile:
    model: DgaModel
    classes: Dict[str, GradedVector] = dc_field(default_factory=dict)
    differential_text: Dict[str, str] = dc_field(default_factory=dict)

    def label(self, name: str) -> GradedVector:
        key = GREEK_ALIASES.get(name, name)
        if key in self.classes:
            return self.classes[key]
        if name in self.classes:
            return self.classes[name]
        raise KeyError(name)


def _where(text: str, needle: str):
    """Line and column (1-based) of the first occurrence of ``needle``."""
    if text is None:
        return None, None
    idx = text.find(needle)
    if idx < 0:
        return None, None
    line = text.count("\n", 0, idx) + 1
    col = idx - (text.rfind("\n", 0, idx) + 1) + 1
    return line, col


def _fail(msg, text, needle=None, inner=None):
    """Raise a located ParseError.  ``inner`` is an error inside the JSON
    string ``needle``; its column is shifted to point into the file."""
    line, col = _where(text, needle) if needle else (None, None)
    if inner is not None:
        msg = f"{msg}: {inner.message}"
        if col is not None and inner.column is not None:
            col += inner.column
    raise ParseError(msg, line, col)


def loads(text: str, field: Optional[Field] = None, check: bool = True) -> ModelFile:
    """Parse a model file.  ``field`` overrides the file's field spec;
    ``check=False`` keeps a model whose differential fails validation."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return from_dict(data, text=text, field=field, check=check)


def load(path, field: Optional[Field] = None, check: bool = True) -> ModelFile:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), field=field, check=check)


def from_dict(data, text: str = None, field: Optional[Field] = None, check: bool = True) -> ModelFile:
    if not isinstance(data, dict):
        raise ParseError("model file must be a JSON object", 1, 1)
    for key in data:
        if key not in _KEYS:
            _fail(f"unknown key {key!r}", text, f'"{key}"')
    for key in ("field", "generators"):
        if key not in data:
            raise ParseError(f"missing key {key!r}")
    try:
        fld = field or Field.from_spec(str(data["field"]))
    except ValueError as exc:
        _fail(str(exc), text, '"field"')
    gens_raw = data["generators"]
    if not isinstance(gens_raw, list):
        _fail("generators must be a list", text, '"generators"')
    gens = []
    for g in gens_raw:
        if not isinstance(g, dict):
            _fail("each generator is an object with name and degree", text, '"generators"')
        for key in g:
            if key not in _GEN_KEYS:
                _fail(f"unknown generator key {key!r}", text, f'"{key}"')
        try:
            if type(g.get("degree")) is not int:
                raise ValueError("degree must be a positive integer")
            gens.append(GeneratorDecl(str(g["name"]), g["degree"]))
        except (KeyError, ValueError) as exc:
            _fail(f"bad generator {g!r}: {exc}", text, f'"{g.get("name", "")}"')
    trunc = data.get("truncation")
    if trunc is None:
        if any(not g.odd for g in gens):
            _fail("truncation is required when there are even generators", text, '"generators"')
        trunc = sum(g.degree for g in gens)
    if type(trunc) is not int or trunc < 0:
        _fail("truncation must be a non-negative integer", text, '"truncation"')
    try:
        alg = Presentation(tuple(gens), trunc, fld)
    except ValueError as exc:
        _fail(str(exc), text, '"generators"')
    diff_raw = data.get("differential") or {}
    if not isinstance(diff_raw, dict):
        _fail("differential must be an object", text, '"differential"')
    names = {g.name for g in gens}
    diffs = {}
    for name, poly in diff_raw.items():
        if name not in names:
            _fail(f"differential for unknown generator {name!r}", text, f'"{name}"')
        if not isinstance(poly, str):
            _fail(f"differential of {name} must be a string", text, f'"{name}"')
        try:
            v = parse_polynomial(alg, poly)
        except ParseError as exc:
            _fail(f"in d {name}", text, json.dumps(poly, ensure_ascii=False), exc)
        diffs[name] = v
    model = DgaModel(alg, diffs, check=check)
    classes = {}
    cls_raw = data.get("classes") or {}
    if not isinstance(cls_raw, dict):
        _fail("classes must be an object", text, '"classes"')
    for label, poly in cls_raw.items():
        if not isinstance(poly, str):
            _fail(f"class {label} must be a string", text, f'"{label}"')
        try:
            classes[label] = parse_polynomial(alg, poly)
        except ParseError as exc:
            _fail(f"in class {label}", text, json.dumps(poly, ensure_ascii=False), exc)
    return ModelFile(model, classes, {k: str(v) for k, v in diff_raw.items()})


def to_dict(mf: ModelFile) -> dict:
    model = mf.model
    out = {
        "field": str(model.field),
        "generators": [{"name": g.name, "degree": g.degree} for g in model.generators],
        "differential": {
            g.name: format_polynomial(model.d_generator(i))
            for i, g in enumerate(model.generators)
            if not model.d_generator(i).is_zero()
        },
        "truncation": model.truncation,
        "classes": {k: format_polynomial(v) for k, v in mf.classes.items()},
    }
    return out


def dumps(mf: ModelFile) -> str:
    return json.dumps(to_dict(mf), indent=2, ensure_ascii=False) + "\n"


def from_model(model: DgaModel, classes: Optional[Dict[str, GradedVector]] = None) -> ModelFile:
    if not isinstance(model.algebra, Presentation):
        raise TypeError("only models on a free presentation can be written as model files")
    return ModelFile(model, dict(classes or {}))


def polynomial_text(v: GradedVector) -> str:
    return format_polynomial(v)
