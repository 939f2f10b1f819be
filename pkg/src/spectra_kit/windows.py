"""Windows of centrally symmetric polygons and the spectral classification.

A window of ``A`` is an open set ``W`` with ``Δ(W) ∩ H(A) = ∅``.  After
normalizing ``A`` on an edge (that edge becomes ``x = 1/2, |y| <= 1/2`` and
the next vertex is ``(a, b)``), the rectangle ``|u| < 1/2, |v| < 1/(2b + 1)``
is a window of measure ``1/(b + 1/2)``.  The product ``|W|·|A|`` is affine
invariant; it equals 1 exactly for parallelograms and hexagons and exceeds 1
for every other symmetric polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import scalar as S
from .errors import InputError, NotAWindow, NotSymmetric
from .geometry import (
    AffineMap,
    ConvexPolygon,
    Shape,
    adjacent_vertex,
    classify_shape,
    measure,
    normalize,
    six_point_hull,
    validate_polygon,
)
from .hsets import HKind, h_enumerate, h_set
from .packing import (
    OpenBoxUnion,
    OpenConvexPolygon,
    as_region,
    delta_set,
    open_rectangle,
    region_contains,
)
from .scalar import Scalar

FLOAT_MARGIN = 1e-6


@dataclass(frozen=True)
class Window:
    """Canonical rectangle plus the data needed to move it back to ``A``.

    ``region`` lives in normalized coordinates; ``back_map`` (the transpose of
    the normalization matrix) carries it to the frequency side of the original
    polygon.  ``measure`` is the canonical measure ``1/(b + 1/2)``.
    """

    region: OpenBoxUnion
    back_map: AffineMap
    measure: Scalar
    polygon: ConvexPolygon
    edge_index: int
    normalization: AffineMap
    adjacent: tuple  # the vertex (a, b)

    @property
    def half_height(self) -> Scalar:
        return self.region.boxes[0][1][1]

    def original_region(self):
        """The window on the frequency side of the original polygon."""
        if all(S.eq(self.back_map.matrix[i][j], int(i == j)) for i in range(2) for j in range(2)):
            return self.region
        corners = [(Fraction(1, 2), -self.half_height), (Fraction(1, 2), self.half_height),
                   (-Fraction(1, 2), self.half_height), (-Fraction(1, 2), -self.half_height)]
        pts = [self.back_map(c) for c in corners]
        return OpenConvexPolygon(validate_polygon(pts))

    @property
    def original_measure(self) -> Scalar:
        return abs(self.back_map.det) * self.measure


def canonical_window(A: ConvexPolygon, edge_index: int = 0) -> Window:
    if not A.is_symmetric:
        raise NotSymmetric("windows are defined for centrally symmetric polygons")
    T, An = normalize(A, edge_index)
    a, b = adjacent_vertex(An)
    half = Fraction(1, 2) if S.is_exact((a, b)) else 0.5
    height = half / (b + half)
    meas = 1 / (b + half)
    back = AffineMap.linear(T.matrix).transpose()
    return Window(open_rectangle(half, height), back, meas, A, edge_index, T, (a, b))


# -- certification -----------------------------------------------------------------

@dataclass(frozen=True)
class WindowCheck:
    ok: bool
    witness: Optional[tuple]
    method: str
    candidates_checked: int

    def __bool__(self) -> bool:
        return self.ok


def _pieces(D) -> list:
    """Vertex lists of the convex open pieces of a difference set."""
    if isinstance(D, OpenConvexPolygon):
        return [list(D.polygon.vertices)]
    out = []
    for box in D.boxes:
        out.append([tuple(c) for c in _corners(box)])
    return out


def _corners(box):
    if not box:
        yield ()
        return
    (lo, hi), rest = box[0], box[1:]
    for tail in _corners(rest):
        yield (lo,) + tail
        yield (hi,) + tail


def _line_hits_piece(verts, normal) -> Optional[tuple]:
    """A point of the open hull of ``verts`` with ``⟨t, normal⟩`` a nonzero integer."""
    vals = [S.dot(v, normal) for v in verts]
    lo, hi = min(vals), max(vals)
    k_lo = S.nearest_integer(lo)
    ks = [k for k in range(k_lo - 1, S.nearest_integer(hi) + 2) if k != 0 and S.sgn(k - lo) > 0 and S.sgn(hi - k) > 0]
    if not ks:
        return None
    k = min(ks, key=abs)
    g = S.centroid(verts)
    gv = S.dot(g, normal)
    if S.is_zero(gv - k):
        return g
    # move from the interior point g towards a vertex on the other side of k
    v = verts[vals.index(hi if S.sgn(k - gv) > 0 else lo)]
    s = (k - gv) / (S.dot(v, normal) - gv)
    return S.add(g, S.scale(s, S.sub(v, g)))


def _circumradius_sq(D) -> Scalar:
    return max(S.norm_sq(v) for piece in _pieces(D) for v in piece)


def _is_window_region(A: ConvexPolygon, W) -> WindowCheck:
    W = as_region(W)
    D = delta_set(W)
    H = h_set(A)
    if H.kind is HKind.LINES:
        for verts in _pieces(D):
            for fam in H.closed_form:
                hit = _line_hits_piece(verts, fam.normal)
                if hit is not None:
                    return WindowCheck(False, hit, "line-families", len(H.closed_form))
        return WindowCheck(True, None, "line-families", len(H.closed_form))
    r2 = _circumradius_sq(D)
    if not S.is_exact(r2):
        r2 = (float(r2) ** 0.5 + FLOAT_MARGIN) ** 2
    pts = h_enumerate(H, radius_sq=r2)
    inside = [t for t in pts.points if region_contains(D, t)]
    if inside:
        witness = min(inside, key=lambda t: (S.norm_sq(t), S.neg(S.canonical_sign(t))))
        return WindowCheck(False, S.canonical_sign(witness), "enumeration", len(pts))
    return WindowCheck(True, None, "enumeration", len(pts))


def is_window(A: ConvexPolygon, W, coords: str = "auto", edge_index: int = 0) -> WindowCheck:
    """Decide ``Δ(W) ∩ H(A) = ∅`` exactly (rational input).

    ``W`` is a :class:`Window` or a region.  With ``coords="canonical"`` the
    region is read in the normalization of ``A`` on ``edge_index`` (a Window
    supplies its own edge); ``"original"`` reads it in ``A``'s coordinates,
    back-mapping a Window first.  ``"auto"`` is canonical for Windows and
    original for bare regions.
    """
    if not A.is_symmetric:
        raise NotSymmetric("windows are defined for centrally symmetric polygons")
    if coords not in ("auto", "canonical", "original"):
        raise InputError(f"unknown coordinate flag {coords!r}")
    if isinstance(W, Window):
        if coords == "original":
            return _is_window_region(A, W.original_region())
        _, An = normalize(A, W.edge_index)
        return _is_window_region(An, W.region)
    if coords == "canonical":
        _, An = normalize(A, edge_index)
        return _is_window_region(An, W)
    return _is_window_region(A, W)


# -- classification ------------------------------------------------------------------

@dataclass(frozen=True)
class ClassificationResult:
    shape: Shape
    spectral: bool
    window: Optional[Window]
    ratio: Optional[Scalar]
    edge_index: Optional[int] = None
    hull_ratio: Optional[Scalar] = None
    edge_ratios: tuple = ()
    justification: str = ""


def _ratio(A: ConvexPolygon, w: Window) -> Scalar:
    _, An = normalize(A, w.edge_index)
    return w.measure * measure(An)


def classify_spectral(A: ConvexPolygon) -> ClassificationResult:
    """Spectral iff parallelogram or symmetric hexagon, certified by windows.

    Every edge is tried; the reported window maximizes ``|W|·|A|`` (lowest
    edge index among ties).  Consistency checks are enforced and raise
    ``AssertionError`` if violated.
    """
    shape = classify_shape(A)
    if shape is Shape.NON_SYMMETRIC:
        return ClassificationResult(
            shape, False, None, None,
            justification="a spectral convex body must be centrally symmetric",
        )
    windows = [canonical_window(A, i) for i in range(A.n)]
    ratios = tuple(_ratio(A, w) for w in windows)
    best = max(range(A.n), key=lambda i: (ratios[i], -i))
    w, ratio = windows[best], ratios[best]
    check = is_window(A, w)
    assert check.ok, f"canonical window fails at {check.witness}"
    area_norm, hull = six_point_hull(A, best)
    hull_ratio = area_norm / hull
    assert S.eq(hull_ratio, ratio), "window ratio disagrees with the hull ratio"
    spectral = shape in (Shape.PARALLELOGRAM, Shape.SYMMETRIC_HEXAGON)
    assert S.eq(ratio, 1) == spectral and (spectral or S.sgn(ratio - 1) > 0)
    why = (
        "window of measure exactly 1/|A| exists"
        if spectral
        else "window of measure larger than 1/|A| exists, so no spectrum can exist"
    )
    return ClassificationResult(shape, spectral, w, ratio, best, hull_ratio, ratios, why)


@dataclass(frozen=True)
class BoundAudit:
    ratio: Scalar
    spectral: bool
    asserted: bool
    passed: Optional[bool]


def window_bound_audit(A: ConvexPolygon, W) -> BoundAudit:
    """For spectral ``A`` check ``|W|·|A| <= 1`` exactly; otherwise only record it.

    ``W`` is a :class:`Window` or a region in ``A``'s coordinates.
    """
    check = is_window(A, W)
    if not check.ok:
        raise NotAWindow(f"Δ(W) meets H(A) at {check.witness}")
    ratio = _ratio(A, W) if isinstance(W, Window) else as_region(W).measure * measure(A)
    spectral = classify_spectral(A).spectral
    if spectral:
        return BoundAudit(ratio, True, True, S.sgn(ratio - 1) <= 0)
    return BoundAudit(ratio, False, False, None)
