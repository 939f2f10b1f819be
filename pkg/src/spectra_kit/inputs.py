"""Loading domains, windows and product jobs from JSON descriptions.

Domain JSON::

    {"type": "polygon", "vertices": [["-1/2", "-1/2"], ...]}   (or a bare polygon file)
    {"type": "interval", "lo": "-1/2", "hi": "1/2"}
    {"type": "box", "box": [[lo, hi], ...]}
    {"type": "box_union", "boxes": [[[lo, hi], ...], ...]}
    {"type": "product", "first": {...}, "second": {...}}

Window JSON::

    {"type": "canonical", "edge": 0}
    {"type": "rectangle", "half_u": "1/2", "half_v": "1/3"}
    {"type": "box", "box": [[lo, hi], ...]}

Job JSON keys: ``A``, ``B`` (domains), ``points`` (CSV path or list),
optional ``box``, ``window``, ``samples``, ``seed``, ``sample_box``,
``x_samples``, ``tolerances``; or ``{"bundled": "hexagon_interval" |
"square_interval", ...keyword arguments}``.
"""

from __future__ import annotations

import json
import os

from . import scalar as S
from .errors import InputError
from .fourier import BoxUnion, Interval, PolygonDomain, Product
from .geometry import ConvexPolygon, ConvexPolytope3, load_polytope, validate_polygon
from .packing import OpenBoxUnion, open_rectangle
from .pointsets import PointSet, read_csv
from .product import ProductSpectrumJob, hexagon_interval_job, square_interval_job
from .windows import canonical_window


def read_json(source, base_dir: str = ".") -> dict:
    if isinstance(source, dict):
        return source
    text = str(source)
    if text.lstrip().startswith("{"):
        return json.loads(text)
    path = text if os.path.isabs(text) else os.path.join(base_dir, text)
    with open(path) as fh:
        return json.load(fh)


def _box(raw) -> tuple:
    return tuple((S.parse_scalar(lo), S.parse_scalar(hi)) for lo, hi in raw)


def load_domain(source, base_dir: str = "."):
    data = read_json(source, base_dir)
    kind = data.get("type")
    if kind is None or kind == "polygon":
        P = load_polytope({"dim": 2, "vertices": data["vertices"]}) if kind else load_polytope(data)
        return PolygonDomain(P) if isinstance(P, ConvexPolygon) else P
    if kind == "interval":
        return Interval(S.parse_scalar(data["lo"]), S.parse_scalar(data["hi"]))
    if kind == "box":
        return BoxUnion((_box(data["box"]),))
    if kind == "box_union":
        return BoxUnion(tuple(_box(b) for b in data["boxes"]))
    if kind == "product":
        return Product(load_domain(data["first"], base_dir), load_domain(data["second"], base_dir))
    raise InputError(f"unknown domain type {kind!r}")


def load_polytope_any(source, base_dir: str = "."):
    """A polygon or 3D polytope; a single 2D box is read as a rectangle."""
    dom = load_domain(source, base_dir)
    if isinstance(dom, PolygonDomain):
        return dom.polygon
    if isinstance(dom, ConvexPolytope3):
        return dom
    if isinstance(dom, BoxUnion) and len(dom.boxes) == 1 and dom.dim == 2:
        (x0, x1), (y0, y1) = dom.boxes[0]
        return validate_polygon([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    raise InputError("a polygon or 3D polytope is required")


def load_polygon(source, base_dir: str = ".") -> ConvexPolygon:
    P = load_polytope_any(source, base_dir)
    if not isinstance(P, ConvexPolygon):
        raise InputError("a polygon is required")
    return P


def load_window(spec, A=None):
    spec = spec or {"type": "canonical"}
    kind = spec.get("type", "canonical")
    if kind == "canonical":
        if not isinstance(A, ConvexPolygon):
            raise InputError("a canonical window needs a polygon A")
        return canonical_window(A, int(spec.get("edge", 0)))
    if kind == "rectangle":
        return open_rectangle(S.parse_scalar(spec["half_u"]), S.parse_scalar(spec["half_v"]))
    if kind == "box":
        return OpenBoxUnion((_box(spec["box"]),))
    raise InputError(f"unknown window type {kind!r}")


def load_points(source, box=None, base_dir: str = ".") -> PointSet:
    if isinstance(source, (list, tuple)):
        return PointSet.from_points([[S.parse_scalar(c) for c in p] for p in source], _box(box) if box else None)
    path = source if os.path.isabs(source) else os.path.join(base_dir, source)
    return read_csv(path, _box(box) if box else None)


_TOLERANCE_KEYS = ("tol_orth", "tol_tile", "compat_tol")
_INT_KEYS = ("gamma_grid_steps", "audit_grid_steps")


def load_job(source, base_dir: str = ".") -> ProductSpectrumJob:
    data = read_json(source, base_dir)
    if not isinstance(source, dict) and not str(source).lstrip().startswith("{"):
        base_dir = os.path.dirname(os.path.join(base_dir, str(source))) or "."
    opts = {}
    for key in ("seed", "n_samples") + _INT_KEYS:
        if key in data:
            opts[key] = int(data[key])
    if "samples" in data:
        opts["n_samples"] = int(data["samples"])
    for key in _TOLERANCE_KEYS:
        if key in data.get("tolerances", {}):
            opts[key] = float(data["tolerances"][key])
    if "sample_box" in data:
        opts["sample_box"] = _box(data["sample_box"])
    if "x_samples" in data:
        opts["x_samples"] = [[S.parse_scalar(c) for c in x] for x in data["x_samples"]]
    if "audit_truncation" in data:
        opts["audit_truncation"] = float(data["audit_truncation"])
    bundled = data.get("bundled")
    if bundled:
        extra = {k: data[k] for k in ("radius", "K") if k in data}
        if bundled == "hexagon_interval":
            if "shifts" in data:
                extra["shifts"] = data["shifts"]
            return hexagon_interval_job(**extra, **opts)
        if bundled == "square_interval":
            return square_interval_job(**extra, **opts)
        raise InputError(f"unknown bundled job {bundled!r}")
    A = load_domain(data["A"], base_dir)
    A = A.polygon if isinstance(A, PolygonDomain) else A
    B = load_domain(data["B"], base_dir)
    L = load_points(data["points"], data.get("box"), base_dir)
    W = load_window(data.get("window"), A)
    return ProductSpectrumJob(A, B, L, W, **opts)
