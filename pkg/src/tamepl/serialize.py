"""Problem bundles and deterministic JSON output.

A bundle is one JSON object::

    {
      "cone": {"hrep": [...]} | {"vrep": [...]},
      "hyperplanes": [{"normal": [...], "offset": "p/q"}, ...],
      "dim": 2,                       # optional when hyperplanes are given
      "poset": {"elements": [...], "hasse": [[p, q], ...]},
      "assign": {"+-0": "p", ...} | [{"region": [halfspace, ...], "element": "p"}, ...],
      "complex": {"terms": {...}, "differentials": {...}} | "module": {...},
      "field": "q" | "fp:<p>",
      "options": {"semantics": "conic", "kind": "upset"}
    }

``assign`` given as a rule list maps each face to the element of the first
rule whose half-spaces contain the face's sample point.
"""
import json

import jsonschema

from .errors import InputError
from .geometry import Arrangement, Cone, HalfSpace
from .encoding import Encoding, PLComplex
from .linalg import Field
from .poset import FinitePoset, PosetComplex, PosetModule

_RAT = {"oneOf": [{"type": "string"}, {"type": "integer"}]}
_HALF = {
    "type": "object",
    "required": ["normal"],
    "properties": {
        "normal": {"type": "array", "items": _RAT, "minItems": 1},
        "offset": _RAT,
        "strict": {"type": "boolean"},
    },
}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _RAT}}
_MODULE = {
    "type": "object",
    "properties": {
        "rank": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "edges": {"type": "object", "additionalProperties": _MATRIX},
    },
}
_HOM = {"type": "object", "properties": {"components": {"type": "object", "additionalProperties": _MATRIX}}}

BUNDLE_SCHEMA = {
    "type": "object",
    "required": ["cone", "poset", "assign"],
    "properties": {
        "cone": {
            "type": "object",
            "properties": {
                "hrep": {"type": "array", "items": _HALF},
                "vrep": {"type": "array", "items": {"type": "array", "items": _RAT, "minItems": 1}},
            },
            "anyOf": [{"required": ["hrep"]}, {"required": ["vrep"]}],
        },
        "dim": {"type": "integer", "minimum": 1},
        "hyperplanes": {"type": "array", "items": {
            "type": "object", "required": ["normal"],
            "properties": {"normal": {"type": "array", "items": _RAT, "minItems": 1}, "offset": _RAT}}},
        "poset": {
            "type": "object",
            "required": ["elements"],
            "properties": {
                "elements": {"type": "array", "items": {"type": ["string", "integer"]}},
                "hasse": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
            },
        },
        "assign": {"oneOf": [
            {"type": "object", "additionalProperties": {"type": ["string", "integer"]}},
            {"type": "array", "items": {
                "type": "object", "required": ["element"],
                "properties": {"region": {"type": "array", "items": _HALF},
                               "element": {"type": ["string", "integer"]}}}},
        ]},
        "complex": {
            "type": "object",
            "properties": {
                "terms": {"type": "object", "additionalProperties": _MODULE},
                "differentials": {"type": "object", "additionalProperties": _HOM},
            },
        },
        "module": _MODULE,
        "field": {"type": "string"},
        "options": {"type": "object"},
    },
}


def _pointer(path):
    return "/" + "/".join(str(p) for p in path)


def check_schema(doc):
    """Raise :class:`InputError` pointing at the first schema violation."""
    v = jsonschema.Draft7Validator(BUNDLE_SCHEMA)
    err = jsonschema.exceptions.best_match(v.iter_errors(doc))
    if err is not None:
        raise InputError(f"schema violation: {err.message}", _pointer(err.absolute_path))


class Bundle:
    def __init__(self, doc, field=None):
        check_schema(doc)
        self.doc = doc
        self.options = dict(doc.get("options") or {})
        self.field = field if field is not None else Field.parse(doc.get("field", "q"))
        self.cone = Cone.from_json(doc["cone"], "/cone")
        self.arrangement = Arrangement.from_json(doc.get("hyperplanes", []), doc.get("dim", self.cone.dim),
                                                 "/hyperplanes")
        if self.arrangement.dim != self.cone.dim:
            raise InputError(f"hyperplanes live in dimension {self.arrangement.dim}, cone in {self.cone.dim}",
                             "/hyperplanes")
        self.poset = FinitePoset.from_json(doc["poset"], "/poset")
        self.encoding = Encoding(self.arrangement, self.cone, self.poset, self._assign(doc["assign"]))
        if "complex" in doc:
            self.complex = PosetComplex.from_json(doc["complex"], self.poset, self.field, "/complex")
        elif "module" in doc:
            self.complex = PosetComplex.from_module(
                PosetModule.from_json(doc["module"], self.poset, self.field, "/module"))
        else:
            raise InputError("bundle needs a 'complex' or a 'module'", "/")
        self.pl = PLComplex(self.encoding, self.complex)

    def _assign(self, raw):
        arr = self.arrangement
        if isinstance(raw, dict):
            out = {}
            for k, e in raw.items():
                i = arr.face_of_string(k, f"/assign/{k}")
                if str(e) not in self.poset.index:
                    raise InputError(f"unknown element {e!r}", f"/assign/{k}")
                out[i] = str(e)
            return out
        rules = []
        for n, rule in enumerate(raw):
            hs = [HalfSpace.from_json(h, f"/assign/{n}/region/{k}") for k, h in enumerate(rule.get("region", []))]
            if any(h.dim != arr.dim for h in hs):
                raise InputError("rule half-space has the wrong dimension", f"/assign/{n}/region")
            e = str(rule["element"])
            if e not in self.poset.index:
                raise InputError(f"unknown element {e!r}", f"/assign/{n}/element")
            rules.append((hs, e))
        out = {}
        for i, x in enumerate(arr.samples):
            for hs, e in rules:
                if all(h.contains(x) for h in hs):
                    out[i] = e
                    break
            else:
                raise InputError(f"no assign rule covers face {arr.sign_string(i)!r}", "/assign")
        return out


def load_bundle(path_or_doc, field=None):
    if isinstance(path_or_doc, dict):
        doc = path_or_doc
    else:
        try:
            with open(path_or_doc, encoding="utf-8") as fh:
                doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e.msg} at line {e.lineno}", "/") from None
        except OSError as e:
            raise InputError(f"cannot read bundle: {e.strerror}", str(path_or_doc)) from None
    if isinstance(doc, dict) and "bundle" in doc and "cone" not in doc:
        # an emitted report carries its input bundle
        doc = doc["bundle"]
    if not isinstance(doc, dict):
        raise InputError("bundle must be a JSON object", "/")
    return Bundle(doc, field)


def bundle_json(pl, options=None):
    """A bundle document reproducing a PL complex."""
    d = pl.to_json()
    d.pop("dim", None)
    d["dim"] = pl.arrangement.dim
    if options:
        d["options"] = dict(options)
    return d


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
