"""JSON encoding of reports with exact rationals as ``"p/q"`` strings.

Dataclasses are written as objects tagged with ``"__type__"`` and decoded
back through their type hints, so ``loads(dumps(r)) == r`` for every report
type registered here.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import math
import re
import typing
from fractions import Fraction

import numpy as np

from . import fourier, geometry, hsets, packing, pointsets, product, windows

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_SPECIAL_FLOATS = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}

_REGISTRY = {}


def register(cls):
    _REGISTRY[cls.__name__] = cls
    return cls


for _cls in (
    geometry.ConvexPolygon,
    geometry.ConvexPolytope3,
    geometry.EdgePair,
    geometry.AffineMap,
    geometry.SymmetryAudit3D,
    fourier.Interval,
    fourier.BoxUnion,
    fourier.PolygonDomain,
    fourier.Product,
    pointsets.OrthogonalityReport,
    packing.OpenBoxUnion,
    packing.OpenConvexPolygon,
    packing.GridSpec,
    packing.TilingReport,
    hsets.LineFamily,
    hsets.ConditionReport,
    windows.Window,
    windows.WindowCheck,
    windows.ClassificationResult,
    windows.BoundAudit,
    product.CompatibilityReport,
    product.CutProjectResult,
    product.FactorSample,
    product.AuditStep,
    product.AuditReport,
):
    register(_cls)

_ENUMS = {cls.__name__: cls for cls in (geometry.Shape, hsets.HKind)}


def to_jsonable(obj):
    """Plain JSON structure for ``obj``."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(obj, pointsets.PointSet):
        return {"__type__": "PointSet", **pointsets.to_json(obj)}
    if isinstance(obj, hsets.HSet):
        return {"__type__": "HSet", **obj.to_json()}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"__type__": type(obj).__name__}
        for f in dataclasses.fields(obj):
            out[f.name] = to_jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return json.dumps(to_jsonable(obj), indent=indent, sort_keys=False, allow_nan=False)


def _strip_optional(hint):
    if typing.get_origin(hint) is typing.Union:
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if len(args) == 1:
            return args[0]
    return hint


def _decode(value, hint=None):
    hint = _strip_optional(hint)
    if isinstance(value, dict):
        tag = value.get("__type__")
        if tag == "PointSet":
            return pointsets.from_json(value)
        if tag in _REGISTRY:
            cls = _REGISTRY[tag]
            hints = typing.get_type_hints(cls)
            kwargs = {}
            for f in dataclasses.fields(cls):
                if f.name in value and f.init:
                    kwargs[f.name] = _decode(value[f.name], hints.get(f.name))
            return cls(**kwargs)
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return tuple(_decode(v) for v in value)
    if isinstance(value, str):
        if hint is str:
            return value
        if isinstance(hint, type) and issubclass(hint, enum.Enum):
            return hint(value)
        if hint is float and value in _SPECIAL_FLOATS:
            return _SPECIAL_FLOATS[value]
        if _RATIONAL.match(value):
            return Fraction(value)
        if value in _SPECIAL_FLOATS and hint is not str:
            return _SPECIAL_FLOATS[value]
        return value
    return value


def from_jsonable(data):
    return _decode(data)


def loads(text: str):
    return from_jsonable(json.loads(text))
