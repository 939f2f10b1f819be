"""Convex polygons and 3D polytopes with exact central-symmetry structure.

Coordinates are exact rationals whenever possible (see :mod:`spectra_kit.scalar`).
All objects are frozen; every operation returns new objects.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import scalar as S
from .errors import BadIndex, Degenerate, DimensionMismatch, InputError, NotConvex, NotSymmetric
from .scalar import Scalar, Vec


class Shape(str, enum.Enum):
    PARALLELOGRAM = "Parallelogram"
    SYMMETRIC_HEXAGON = "SymmetricHexagon"
    OTHER_SYMMETRIC = "OtherSymmetric"
    NON_SYMMETRIC = "NonSymmetric"


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices counter-clockwise.

    Build through :func:`validate_polygon`; the constructor trusts its input.
    """

    vertices: tuple
    symmetry_center: Optional[tuple] = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def exact(self) -> bool:
        return S.is_exact(self.vertices)

    @property
    def is_symmetric(self) -> bool:
        return self.symmetry_center is not None

    def edge(self, i: int) -> tuple:
        """Endpoints ``(start, end)`` of edge ``i`` (from vertex i to i+1)."""
        v = self.vertices
        return v[i % self.n], v[(i + 1) % self.n]

    def edge_vector(self, i: int) -> Vec:
        a, b = self.edge(i)
        return S.sub(b, a)

    @property
    def area(self) -> Scalar:
        return measure(self)

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)


@dataclass(frozen=True)
class EdgePair:
    """An opposite-edge pair of a centrally symmetric polygon.

    ``tau`` carries the midpoint of the opposite edge onto the midpoint of the
    edge with index ``index``; ``e`` is that edge's vector, sign-canonicalized.
    """

    e: tuple
    tau: tuple
    index: int
    opposite_index: int


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + shift`` with a square matrix stored row-major."""

    matrix: tuple
    shift: tuple

    @classmethod
    def linear(cls, matrix) -> "AffineMap":
        m = tuple(S.to_vec(row) for row in matrix)
        return cls(m, tuple(Fraction(0) for _ in m))

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls.linear([[int(i == j) for j in range(dim)] for i in range(dim)])

    @classmethod
    def from_lists(cls, matrix, shift=None) -> "AffineMap":
        m = tuple(S.to_vec(row) for row in matrix)
        s = S.to_vec(shift) if shift is not None else tuple(Fraction(0) for _ in m)
        if any(len(row) != len(m) for row in m) or len(s) != len(m):
            raise DimensionMismatch("affine map needs a square matrix and matching shift")
        out = cls(m, s)
        if S.is_zero(out.det):
            raise InputError("affine map is singular")
        return out

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def det(self) -> Scalar:
        return _det(self.matrix)

    def __call__(self, x: Sequence) -> Vec:
        if len(x) != self.dim:
            raise DimensionMismatch(f"point of dim {len(x)} for map of dim {self.dim}")
        return tuple(S.dot(row, x) + c for row, c in zip(self.matrix, self.shift))

    def apply_linear(self, x: Sequence) -> Vec:
        return tuple(S.dot(row, x) for row in self.matrix)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self ∘ other``."""
        m = _matmul(self.matrix, other.matrix)
        s = S.add(self.apply_linear(other.shift), self.shift)
        return AffineMap(m, s)

    def inverse(self) -> "AffineMap":
        inv = _inv(self.matrix)
        s = S.neg(tuple(S.dot(row, self.shift) for row in inv))
        return AffineMap(inv, s)

    def transpose(self) -> "AffineMap":
        return AffineMap(tuple(zip(*self.matrix)), tuple(Fraction(0) for _ in self.matrix))

    def dual(self) -> "AffineMap":
        """Frequency-side partner ``(M^{-1})^T`` (linear, no shift)."""
        return AffineMap(tuple(zip(*_inv(self.matrix))), tuple(Fraction(0) for _ in self.matrix))


@dataclass(frozen=True)
class ConvexPolytope3:
    """3D convex polytope given by vertices and outward-oriented facet cycles."""

    vertices: tuple
    facets: tuple
    symmetry_center: Optional[tuple] = None

    @property
    def exact(self) -> bool:
        return S.is_exact(self.vertices)

    def facet_vertices(self, k: int) -> tuple:
        return tuple(self.vertices[i] for i in self.facets[k])

    def facet_edges(self, k: int) -> list:
        cyc = self.facets[k]
        return [(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))]

    def facet_normal(self, k: int) -> Vec:
        """Outward normal (unnormalized) via Newell's sum over the cycle."""
        pts = self.facet_vertices(k)
        nx = ny = nz = Fraction(0)
        for p, q in zip(pts, pts[1:] + pts[:1]):
            nx += (p[1] - q[1]) * (p[2] + q[2])
            ny += (p[2] - q[2]) * (p[0] + q[0])
            nz += (p[0] - q[0]) * (p[1] + q[1])
        return (nx, ny, nz)


# -- linear algebra on small exact matrices ---------------------------------

def _det(m) -> Scalar:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        return S.dot(m[0], S.cross3(m[1], m[2]))
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * _det(minor)
    return total


def _inv(m) -> tuple:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(a[r][col]))
        if S.is_zero(a[piv][col]):
            raise InputError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _matmul(a, b) -> tuple:
    bt = tuple(zip(*b))
    return tuple(tuple(S.dot(row, col) for col in bt) for row in a)


# -- polygons ----------------------------------------------------------------

def _find_center(points: Sequence[Vec], tol: float = S.ABS_TOL) -> Optional[Vec]:
    """Average of the points if the set is invariant under reflection through it."""
    c = S.centroid(points)
    if S.is_exact(points):
        pts = set(points)
        ok = all(S.sub(S.scale(2, c), p) in pts for p in points)
    else:
        ok = all(
            any(S.vec_eq(S.sub(S.scale(2, c), p), q, tol) for q in points) for p in points
        )
    return c if ok else None


def validate_polygon(vertices: Sequence[Sequence]) -> ConvexPolygon:
    """Validate a convex polygon, enforce CCW order and drop collinear vertices.

    Raises :class:`NotConvex` for reflex turns or self-intersection and
    :class:`Degenerate` for zero area.
    """
    pts = [S.to_vec(v) for v in vertices]
    if len(pts) < 3:
        raise Degenerate("a polygon needs at least 3 vertices")
    if any(len(p) != 2 for p in pts):
        raise DimensionMismatch("polygon vertices must be 2D")
    if not S.is_exact(pts):
        pts = [tuple(float(c) for c in p) for p in pts]
    # drop consecutive repeats (zero-length edges)
    cleaned = []
    for p in pts:
        if not cleaned or not S.vec_eq(p, cleaned[-1]):
            cleaned.append(p)
    if len(cleaned) > 1 and S.vec_eq(cleaned[0], cleaned[-1]):
        cleaned.pop()
    pts = cleaned
    if len(pts) < 3:
        raise Degenerate("fewer than 3 distinct vertices")

    signed2 = sum((S.cross2(p, q) for p, q in zip(pts, pts[1:] + pts[:1])), Fraction(0))
    if S.is_zero(signed2):
        raise Degenerate("polygon has zero area")
    if S.sgn(signed2) < 0:
        pts.reverse()

    changed = True
    while changed and len(pts) >= 3:
        changed = False
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            cr = S.cross2(S.sub(b, a), S.sub(c, b))
            if S.is_zero(cr):
                if S.sgn(S.dot(S.sub(b, a), S.sub(c, b))) <= 0:
                    raise NotConvex(f"polygon doubles back at vertex {b}")
                del pts[i]
                changed = True
                break
            if S.sgn(cr) < 0:
                raise NotConvex(f"right turn at vertex {b}")
    if len(pts) < 3:
        raise Degenerate("all vertices collinear")

    # all turns are left; a star-shaped winding still fails this half-plane test
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        d = S.sub(b, a)
        for j in range(n):
            if j in (i, (i + 1) % n):
                continue
            if S.sgn(S.cross2(d, S.sub(pts[j], a))) <= 0:
                raise NotConvex("polygon is self-intersecting")

    return ConvexPolygon(tuple(pts), _find_center(pts))


def polygon(vertices: Sequence[Sequence]) -> ConvexPolygon:
    """Alias for :func:`validate_polygon`."""
    return validate_polygon(vertices)


def measure(P: Union[ConvexPolygon, ConvexPolytope3]) -> Scalar:
    """Area (shoelace) of a polygon or volume of a 3D polytope."""
    if isinstance(P, ConvexPolytope3):
        return _volume3(P)
    v = P.vertices
    twice = sum((S.cross2(p, q) for p, q in zip(v, v[1:] + v[:1])), Fraction(0))
    return twice / 2


def _volume3(P: ConvexPolytope3) -> Scalar:
    total = Fraction(0)
    for cyc in P.facets:
        p0 = P.vertices[cyc[0]]
        for i in range(1, len(cyc) - 1):
            p1, p2 = P.vertices[cyc[i]], P.vertices[cyc[i + 1]]
            total += S.dot(p0, S.cross3(p1, p2))
    return total / 6


def edge_pairs(P: ConvexPolygon) -> list:
    """One :class:`EdgePair` per pair of opposite edges (``n/2`` of them)."""
    if not P.is_symmetric:
        raise NotSymmetric("edge pairing needs a centrally symmetric polygon")
    n = P.n
    half = n // 2
    pairs = []
    for i in range(half):
        j = i + half
        a, b = P.edge(i)
        c, d = P.edge(j)
        tau = S.sub(S.scale(Fraction(1, 2), S.add(a, b)), S.scale(Fraction(1, 2), S.add(c, d)))
        idx, opp = i, j
        if not S.lex_positive(tau):
            tau, idx, opp = S.neg(tau), j, i
        pairs.append(EdgePair(S.canonical_sign(P.edge_vector(idx)), tau, idx, opp))
    return pairs


def normalize(P: ConvexPolygon, edge_index: int) -> tuple:
    """Affine normalization on a chosen edge.

    Returns ``(T, P2)`` with ``P2 = T(P)`` symmetric about the origin, edge
    ``edge_index`` sent to the segment ``(1/2,-1/2) -> (1/2,1/2)``, and the
    vertices of ``P2`` listed starting from ``(1/2,-1/2)``, so that
    ``P2.vertices[2]`` is the adjacent vertex ``(a, b)`` with ``b >= 1/2``.
    """
    if not P.is_symmetric:
        raise NotSymmetric("normalization needs a centrally symmetric polygon")
    if not isinstance(edge_index, int) or not 0 <= edge_index < P.n:
        raise BadIndex(f"edge index {edge_index} out of range for {P.n} edges")
    c = P.symmetry_center
    p, q = (S.sub(v, c) for v in P.edge(edge_index))
    half = Fraction(1, 2)
    target = ((half, half), (-half, half))  # columns (1/2,-1/2), (1/2,1/2)
    src_inv = _inv(((p[0], q[0]), (p[1], q[1])))
    m = _matmul(target, src_inv)
    if not S.is_exact(m):
        m = tuple(tuple(float(x) for x in row) for row in m)
    lin = AffineMap(m, (Fraction(0), Fraction(0)))
    T = AffineMap(m, S.neg(lin.apply_linear(c)))
    verts = [T(v) for v in P.vertices]
    verts = verts[edge_index:] + verts[:edge_index]
    zero = Fraction(0)
    if not S.is_exact(verts):
        verts = [tuple(float(x) for x in v) for v in verts]
        zero = 0.0
    return T, ConvexPolygon(tuple(verts), (zero, zero))


def adjacent_vertex(P_norm: ConvexPolygon) -> Vec:
    """The vertex ``(a, b)`` following ``(1/2, 1/2)`` in a normalized polygon."""
    return P_norm.vertices[2]


def is_normalized(P: ConvexPolygon) -> bool:
    half = Fraction(1, 2)
    if not P.is_symmetric or not S.vec_eq(P.symmetry_center, (0, 0)):
        return False
    n = P.n
    for i in range(n):
        a, b = P.edge(i)
        if S.vec_eq(a, (half, -half)) and S.vec_eq(b, (half, half)):
            return True
    return False


def classify_shape(P: ConvexPolygon) -> Shape:
    if not P.is_symmetric:
        return Shape.NON_SYMMETRIC
    if P.n == 4:
        return Shape.PARALLELOGRAM
    if P.n == 6:
        return Shape.SYMMETRIC_HEXAGON
    return Shape.OTHER_SYMMETRIC


def six_point_hull(P: ConvexPolygon, edge_index: int) -> tuple:
    """Area of the normalized polygon and of the hull of the six proof points.

    The points are the endpoints of the chosen edge, its neighbour ``(a, b)``
    and their reflections.  Computed independently of the window formula.
    """
    _, Pn = normalize(P, edge_index)
    half = Fraction(1, 2)
    a, b = adjacent_vertex(Pn)
    if Pn.n == 4:
        pts = [(half, -half), (half, half), (-half, half), (-half, -half)]
    else:
        pts = [(half, -half), (half, half), (a, b), (-half, half), (-half, -half), (-a, -b)]
    return measure(Pn), measure(validate_polygon(pts))


# -- affine images ------------------------------------------------------------

def apply_affine(T: AffineMap, obj):
    """Image of a polygon, 3D polytope or point set under ``T``."""
    from .pointsets import PointSet  # local: pointsets imports geometry

    if isinstance(obj, ConvexPolygon):
        if T.dim != 2:
            raise DimensionMismatch("polygon needs a 2D map")
        return validate_polygon([T(v) for v in obj.vertices])
    if isinstance(obj, ConvexPolytope3):
        if T.dim != 3:
            raise DimensionMismatch("3D polytope needs a 3D map")
        verts = tuple(T(v) for v in obj.vertices)
        facets = obj.facets
        if S.sgn(T.det) < 0:
            facets = tuple(tuple(reversed(f)) for f in facets)
        c = T(obj.symmetry_center) if obj.symmetry_center is not None else None
        return ConvexPolytope3(verts, facets, c)
    if isinstance(obj, PointSet):
        if T.dim != obj.dim:
            raise DimensionMismatch("point set dimension does not match the map")
        pts = [T(p) for p in obj.points]
        corners = [T(c) for c in itertools.product(*obj.box)]
        box = tuple(
            (min(c[k] for c in corners), max(c[k] for c in corners)) for k in range(obj.dim)
        )
        return PointSet.from_points(pts, box)
    raise TypeError(f"cannot apply an affine map to {type(obj).__name__}")


# -- 3D polytopes --------------------------------------------------------------

def _order_cycle(pts_idx, vertices, normal):
    """Order coplanar vertex indices counter-clockwise seen from ``normal``."""
    c = S.centroid([vertices[i] for i in pts_idx])
    ref = S.sub(vertices[pts_idx[0]], c)
    other = S.cross3(normal, ref)

    def angle(i):
        d = S.sub(vertices[i], c)
        return math.atan2(float(S.dot(d, other)), float(S.dot(d, ref)))

    return tuple(sorted(pts_idx, key=angle))


def polytope_from_vertices(vertices: Sequence[Sequence]) -> ConvexPolytope3:
    """Facets of a small polytope whose given points are exactly its vertices.

    Brute force over vertex triples (exact arithmetic), meant for building
    bundled test bodies; the input must be in convex position.
    """
    verts = tuple(S.to_vec(v) for v in vertices)
    if any(len(v) != 3 for v in verts):
        raise DimensionMismatch("3D polytope vertices must be 3D")
    seen = {}
    n = len(verts)
    for i, j, k in itertools.combinations(range(n), 3):
        nrm = S.cross3(S.sub(verts[j], verts[i]), S.sub(verts[k], verts[i]))
        if all(S.is_zero(x) for x in nrm):
            continue
        sides = [S.sgn(S.dot(nrm, S.sub(v, verts[i]))) for v in verts]
        if all(s <= 0 for s in sides):
            outward = nrm
        elif all(s >= 0 for s in sides):
            outward = S.neg(nrm)
        else:
            continue
        on = tuple(sorted(m for m, s in enumerate(sides) if s == 0))
        if on not in seen:
            seen[on] = outward
    facets = tuple(_order_cycle(list(on), verts, nrm) for on, nrm in seen.items())
    P = ConvexPolytope3(verts, facets)
    return validate_polytope3(P)


def validate_polytope3(P: ConvexPolytope3) -> ConvexPolytope3:
    """Check coplanarity, facet convexity and outward orientation."""
    verts = tuple(S.to_vec(v) for v in P.vertices)
    facets = tuple(tuple(int(i) for i in f) for f in P.facets)
    if len(verts) < 4 or len(facets) < 4:
        raise Degenerate("a 3D polytope needs at least 4 vertices and 4 facets")
    Q = ConvexPolytope3(verts, facets)
    used = set()
    for k, cyc in enumerate(facets):
        if len(cyc) < 3 or len(set(cyc)) != len(cyc):
            raise InputError(f"facet {k} is not a simple cycle")
        used.update(cyc)
        nrm = Q.facet_normal(k)
        if all(S.is_zero(x) for x in nrm):
            raise Degenerate(f"facet {k} has zero area")
        p0 = verts[cyc[0]]
        for i in cyc:
            if not S.is_zero(S.dot(nrm, S.sub(verts[i], p0))):
                raise NotConvex(f"facet {k} is not planar")
        m = len(cyc)
        for t in range(m):
            a, b, c = verts[cyc[t - 1]], verts[cyc[t]], verts[cyc[(t + 1) % m]]
            if S.sgn(S.dot(S.cross3(S.sub(b, a), S.sub(c, b)), nrm)) <= 0:
                raise NotConvex(f"facet {k} is not strictly convex")
        for v in verts:
            if S.sgn(S.dot(nrm, S.sub(v, p0))) > 0:
                raise NotConvex(f"facet {k} is not a supporting plane (or is inward-oriented)")
    if used != set(range(len(verts))):
        raise InputError("some vertices belong to no facet")
    return ConvexPolytope3(verts, facets, _find_center(verts))


def facet_is_symmetric(P: ConvexPolytope3, k: int) -> bool:
    return _find_center(list(P.facet_vertices(k))) is not None


def _facet_key(P: ConvexPolytope3, k: int) -> frozenset:
    return frozenset(P.facet_vertices(k))


def opposite_facet(P: ConvexPolytope3, k: int) -> Optional[int]:
    """Index of the facet obtained by reflecting facet ``k`` through the center."""
    c = P.symmetry_center
    if c is None:
        return None
    target = frozenset(S.sub(S.scale(2, c), v) for v in P.facet_vertices(k))
    for j in range(len(P.facets)):
        if _facet_key(P, j) == target:
            return j
    return None


@dataclass(frozen=True)
class SymmetryAudit3D:
    body_symmetric: bool
    all_facets_symmetric: bool
    facet_pairs: tuple = ()  # (facet index, opposite index, tau_F)
    facet_verdicts: tuple = ()


def symmetry_audit_3d(P: ConvexPolytope3) -> SymmetryAudit3D:
    """Central symmetry of the body and of each facet, plus facet translations."""
    verdicts = tuple(facet_is_symmetric(P, k) for k in range(len(P.facets)))
    pairs = []
    body = P.symmetry_center is not None
    if body:
        done = set()
        for k in range(len(P.facets)):
            if k in done:
                continue
            j = opposite_facet(P, k)
            done.update((k, j))
            tau = S.sub(S.centroid(P.facet_vertices(k)), S.centroid(P.facet_vertices(j)))
            if not S.lex_positive(tau):
                k, j, tau = j, k, S.neg(tau)
            pairs.append((k, j, tau))
    return SymmetryAudit3D(body, all(verdicts), tuple(pairs), verdicts)


def prism(base: ConvexPolygon, lo=0, hi=1) -> ConvexPolytope3:
    """Right prism ``base x [lo, hi]``."""
    lo, hi = S.to_scalar(lo), S.to_scalar(hi)
    n = base.n
    verts = [(x, y, lo) for x, y in base.vertices] + [(x, y, hi) for x, y in base.vertices]
    facets = [tuple(range(n - 1, -1, -1)), tuple(range(n, 2 * n))]
    for i in range(n):
        j = (i + 1) % n
        facets.append((i, j, n + j, n + i))
    return validate_polytope3(ConvexPolytope3(tuple(verts), tuple(facets)))


# -- bundled shapes ----------------------------------------------------------

def unit_square() -> ConvexPolygon:
    h = Fraction(1, 2)
    return validate_polygon([(-h, -h), (h, -h), (h, h), (-h, h)])


def hexagon(a=0, b=1) -> ConvexPolygon:
    """Normalized hexagon with vertices (1/2,±1/2), (a,b) and their reflections."""
    h = Fraction(1, 2)
    a, b = S.to_scalar(a), S.to_scalar(b)
    return validate_polygon([(h, -h), (h, h), (a, b), (-h, h), (-h, -h), (-a, -b)])


def octagon() -> ConvexPolygon:
    """Square ``[-3/2, 3/2]^2`` with unit corners cut off (area 7)."""
    t, o = Fraction(3, 2), Fraction(1, 2)
    return validate_polygon(
        [(t, -o), (t, o), (o, t), (-o, t), (-t, o), (-t, -o), (-o, -t), (o, -t)]
    )


def unit_cube() -> ConvexPolytope3:
    h = Fraction(1, 2)
    return polytope_from_vertices(list(itertools.product((-h, h), repeat=3)))


def regular_tetrahedron() -> ConvexPolytope3:
    return polytope_from_vertices([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)])


def truncated_octahedron() -> ConvexPolytope3:
    """All permutations of ``(0, ±1, ±2)``; volume 32."""
    pts = set()
    for perm in itertools.permutations(range(3)):
        for s1, s2 in itertools.product((-1, 1), repeat=2):
            base = (0, s1 * 1, s2 * 2)
            pts.add(tuple(base[perm[i]] for i in range(3)))
    return polytope_from_vertices(sorted(pts))


# -- JSON schema --------------------------------------------------------------

def load_polytope(source) -> Union[ConvexPolygon, ConvexPolytope3]:
    """Read ``{"dim": 2|3, "vertices": [...], "facets": [...]}``.

    ``source`` is a path, a JSON string or an already-parsed dict.
    Rationals may be written as strings ``"p/q"``.
    """
    data = _read_json(source)
    dim = int(data.get("dim", len(data["vertices"][0])))
    verts = [[S.parse_scalar(x) for x in v] for v in data["vertices"]]
    if dim == 2:
        return validate_polygon(verts)
    if dim == 3:
        if "facets" in data:
            return validate_polytope3(ConvexPolytope3(tuple(map(tuple, verts)), tuple(map(tuple, data["facets"]))))
        return polytope_from_vertices(verts)
    raise InputError(f"unsupported dimension {dim}")


def dump_polytope(P: Union[ConvexPolygon, ConvexPolytope3]) -> dict:
    out = {
        "dim": 2 if isinstance(P, ConvexPolygon) else 3,
        "vertices": [[S.format_scalar(x) if isinstance(x, Fraction) else x for x in v] for v in P.vertices],
    }
    if isinstance(P, ConvexPolytope3):
        out["facets"] = [list(f) for f in P.facets]
    return out


def _read_json(source) -> dict:
    if isinstance(source, dict):
        return source
    text = str(source)
    if text.lstrip().startswith("{"):
        return json.loads(text)
    with open(text) as fh:
        return json.load(fh)
