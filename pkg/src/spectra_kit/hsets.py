"""Integrality constraint sets built from edge (2D) or facet/edge (3D) data.

For a centrally symmetric polygon ``A`` and an opposite-edge pair with edge
vector ``e`` and translation ``τ_e``::

    H(A, e) = {t : ⟨t, τ_e⟩ ∈ Z  or  ⟨t, e⟩ ∈ Z \\ {0}}
    H(A)    = ∩_e H(A, e) \\ {0}

Every predicate is invariant under ``t -> -t`` and under flipping the sign of
any normal, so sign conventions for ``e`` never change a verdict.  For a
parallelogram ``H(A)`` is a union of lines; otherwise it is discrete and
:func:`h_enumerate` lists it inside a ball.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import scalar as S
from .errors import (
    ContinuousKind,
    DimensionMismatch,
    FacetNotSymmetric,
    InputError,
    IsPrism,
    NotSymmetric,
)
from .fourier import as_domain, is_zero as ft_is_zero
from .geometry import (
    ConvexPolygon,
    ConvexPolytope3,
    EdgePair,
    _inv,
    classify_shape,
    edge_pairs,
    facet_is_symmetric,
    opposite_facet,
    Shape,
)
from .pointsets import PointSet, _unique_differences

# float pre-filter: values farther than this from Z cannot be integers exactly
_PREFILTER = 1e-7


class HKind(str, enum.Enum):
    DISCRETE = "DiscretePoints"
    LINES = "LineFamilies"
    PLANES_3D = "PlaneFamilies3D"


@dataclass(frozen=True)
class LineFamily:
    """``{t : ⟨t, normal⟩ ∈ Z}``, or ``∈ Z \\ {0}`` when ``nonzero``."""

    normal: tuple
    nonzero: bool

    def __post_init__(self):
        n = S.to_vec(self.normal)
        if all(S.is_zero(c) for c in n):
            raise InputError("line family needs a nonzero normal")
        object.__setattr__(self, "normal", n)

    def contains(self, t: Sequence) -> bool:
        v = S.dot(t, self.normal)
        return S.is_nonzero_integer(v) if self.nonzero else S.is_integer(v)

    def contains_array(self, T: np.ndarray, tol: float = S.ABS_TOL) -> np.ndarray:
        v = T @ np.array([float(c) for c in self.normal])
        r = np.round(v)
        ok = np.abs(v - r) <= tol
        return ok & (r != 0) if self.nonzero else ok

    def to_json(self) -> dict:
        return {"normal": [S.format_scalar(c) for c in self.normal], "offsets": "Z\\{0}" if self.nonzero else "Z"}


@dataclass(frozen=True)
class HEdgeSet:
    """Union of the ``τ`` family (offsets Z) and the ``e`` family (offsets Z \\ {0})."""

    pair: EdgePair
    tau_family: LineFamily
    e_family: LineFamily

    @property
    def families(self) -> tuple:
        return (self.tau_family, self.e_family)

    def contains(self, t) -> bool:
        return self.tau_family.contains(t) or self.e_family.contains(t)

    def contains_array(self, T, tol: float = S.ABS_TOL) -> np.ndarray:
        return self.tau_family.contains_array(T, tol) | self.e_family.contains_array(T, tol)


@dataclass(frozen=True)
class HFacetEdgeSet:
    """3D clause for a (facet, edge) pair: three plane families joined by "or"."""

    facet: int
    edge: tuple  # vertex indices
    quadrilateral: bool
    tau_F: LineFamily
    tau_Fe: LineFamily
    e_family: LineFamily

    @property
    def families(self) -> tuple:
        return (self.tau_F, self.tau_Fe, self.e_family)

    def contains(self, t) -> bool:
        return any(f.contains(t) for f in self.families)

    def contains_array(self, T, tol: float = S.ABS_TOL) -> np.ndarray:
        out = self.tau_F.contains_array(T, tol)
        for f in self.families[1:]:
            out = out | f.contains_array(T, tol)
        return out


@dataclass(eq=False)
class HSet:
    """``H(A)`` as an intersection of per-edge (or per facet-edge) clauses, minus 0."""

    source: object
    per_edge: tuple
    kind: HKind
    closed_form: tuple = ()  # parallelograms: the two families with offsets Z \ {0}
    cache: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return 3 if self.kind is HKind.PLANES_3D else 2

    def families(self) -> list:
        """Distinct families across all clauses (by normal up to sign and offset type)."""
        seen, out = set(), []
        for clause in self.per_edge:
            for f in clause.families:
                key = (S.canonical_sign(f.normal), f.nonzero)
                if key not in seen:
                    seen.add(key)
                    out.append(f)
        return out

    def to_json(self) -> dict:
        clauses = [[f.to_json() for f in c.families] for c in self.per_edge]
        out = {"kind": self.kind.value, "clauses": clauses}
        if self.closed_form:
            out["closed_form"] = [f.to_json() for f in self.closed_form]
        return out


# -- construction ----------------------------------------------------------------

def h_edge(A: ConvexPolygon, pair: EdgePair) -> HEdgeSet:
    if not A.is_symmetric:
        raise NotSymmetric("H(A, e) needs a centrally symmetric polygon")
    return HEdgeSet(pair, LineFamily(pair.tau, False), LineFamily(pair.e, True))


def h_set(A: ConvexPolygon) -> HSet:
    if not A.is_symmetric:
        raise NotSymmetric("H(A) needs a centrally symmetric polygon")
    clauses = tuple(h_edge(A, p) for p in edge_pairs(A))
    if classify_shape(A) is Shape.PARALLELOGRAM:
        closed = tuple(LineFamily(c.pair.tau, True) for c in clauses)
        return HSet(A, clauses, HKind.LINES, closed)
    return HSet(A, clauses, HKind.DISCRETE)


def _check_dim(H: HSet, t) -> tuple:
    t = S.to_vec(t)
    if len(t) != H.dim:
        raise DimensionMismatch(f"point of dim {len(t)} for an H-set of dim {H.dim}")
    return t


def h_membership(H: HSet, t) -> bool:
    """Exact for rational ``t``; floats use ``dist(·, Z) <= 1e-9``."""
    t = _check_dim(H, t)
    if all(S.is_zero(c) for c in t):
        return False
    return all(c.contains(t) for c in H.per_edge)


def h_membership_array(H: HSet, T, tol: float = S.ABS_TOL) -> np.ndarray:
    """Vectorized float membership (non-certifying)."""
    T = np.asarray(T, dtype=float)
    if T.shape[-1] != H.dim:
        raise DimensionMismatch("point dimension differs from the H-set")
    out = np.any(np.abs(T) > tol, axis=-1)
    for c in H.per_edge:
        out &= c.contains_array(T, tol)
    return out


def h_membership_many(H: HSet, points: Sequence) -> np.ndarray:
    """Exact verdicts for many points: a float pre-filter, then exact rechecks."""
    if not len(points):
        return np.zeros(0, dtype=bool)
    arr = np.array([[float(c) for c in p] for p in points])
    cand = h_membership_array(H, arr, _PREFILTER)
    out = np.zeros(len(points), dtype=bool)
    for i in np.nonzero(cand)[0]:
        out[i] = h_membership(H, points[i])
    return out


# -- enumeration -------------------------------------------------------------------

def _offset_range(normal, r2) -> range:
    # |⟨t, n⟩| <= |t|·|n| <= r·|n|
    bound = math.isqrt(int(math.floor(float(r2 * S.norm_sq(normal))))) + 1
    return range(-bound, bound + 1)


def _exact_radius_sq(radius, radius_sq):
    if radius_sq is not None:
        return S.to_scalar(radius_sq)
    r = S.to_scalar(radius)
    if S.sgn(r) < 0:
        raise InputError("radius must be non-negative")
    return r * r


def h_enumerate(H: HSet, radius=None, radius_sq=None) -> PointSet:
    """All points of a discrete ``H(A)`` with ``|t| <= radius``.

    Each such point lies on a line of one family of the first clause and, as
    ``H(A)`` is discrete, on a non-parallel line of some other clause, so
    intersecting those line pairs and filtering by full membership is
    complete.  ``radius_sq`` may be passed instead for an exact rational bound.
    """
    if H.kind is HKind.LINES:
        raise ContinuousKind("H(A) of a parallelogram is a union of lines")
    if H.kind is HKind.PLANES_3D:
        return h3_enumerate(H, radius, radius_sq)
    r2 = _exact_radius_sq(radius, radius_sq)
    key = ("enum", r2)
    if key in H.cache:
        return H.cache[key]
    A = H.source
    exact = S.is_exact(A.vertices)
    firsts = H.per_edge[0].families
    others = [f for c in H.per_edge[1:] for f in c.families]
    cands = set()
    for f0 in firsts:
        for f1 in others:
            if S.is_zero(S.cross2(f0.normal, f1.normal)):
                continue
            inv = _inv((f0.normal, f1.normal))  # rows are the two normals
            c0 = (inv[0][0], inv[1][0])
            c1 = (inv[0][1], inv[1][1])
            for k0 in _offset_range(f0.normal, r2):
                if f0.nonzero and k0 == 0:
                    continue
                for k1 in _offset_range(f1.normal, r2):
                    if f1.nonzero and k1 == 0:
                        continue
                    t = S.add(S.scale(k0, c0), S.scale(k1, c1))
                    if not exact:
                        t = tuple(round(float(x), 10) + 0.0 for x in t)
                    cands.add(t)
    pts = [t for t in cands if S.sgn(S.norm_sq(t) - r2) <= 0 and h_membership(H, t)]
    pts.sort()
    out = PointSet.from_points(pts, _exact_box(r2, 2), dim=2)
    H.cache[key] = out
    return out


def _exact_box(r2, dim) -> list:
    # smallest integer box containing the closed ball of radius sqrt(r2)
    r = math.isqrt(math.ceil(r2))
    if r * r < r2:
        r += 1
    return [(-r, r)] * dim


# -- 3D -----------------------------------------------------------------------------

def _is_prism(P: ConvexPolytope3) -> Optional[tuple]:
    """A facet pair ``(F, F')`` with ``F' = F − τ_F`` covering all vertices, if any."""
    nverts = len(P.vertices)
    for k in range(len(P.facets)):
        j = opposite_facet(P, k)
        if j is None or j <= k:
            continue
        Fk, Fj = P.facet_vertices(k), P.facet_vertices(j)
        if len(Fk) + len(Fj) != nverts:
            continue
        tau = S.sub(S.centroid(Fk), S.centroid(Fj))
        if {S.sub(v, tau) for v in Fk} == set(Fj):
            return (k, j)
    return None


def _facet_edge_tau(P: ConvexPolytope3, k: int, i: int) -> tuple:
    """Translation within facet ``k`` carrying the edge opposite to edge ``i`` onto it."""
    edges = P.facet_edges(k)
    m = len(edges)
    a, b = (P.vertices[v] for v in edges[i])
    c, d = (P.vertices[v] for v in edges[(i + m // 2) % m])
    return S.scale(Fraction(1, 2), S.sub(S.add(a, b), S.add(c, d)))


def h3_set(A: ConvexPolytope3) -> HSet:
    """Clauses over all (facet, edge) pairs; prisms are rejected."""
    if A.symmetry_center is None:
        raise NotSymmetric("H(A) needs a centrally symmetric polytope")
    for k in range(len(A.facets)):
        if not facet_is_symmetric(A, k):
            raise FacetNotSymmetric(f"facet {k} is not centrally symmetric")
    pr = _is_prism(A)
    if pr is not None:
        raise IsPrism(f"facets {pr[0]} and {pr[1]} make the polytope a prism")
    clauses = []
    seen = set()
    for k in range(len(A.facets)):
        j = opposite_facet(A, k)
        tau_F = S.sub(S.centroid(A.facet_vertices(k)), S.centroid(A.facet_vertices(j)))
        quad = len(A.facets[k]) == 4
        for i, edge in enumerate(A.facet_edges(k)):
            tau_Fe = _facet_edge_tau(A, k, i)
            e = S.sub(A.vertices[edge[1]], A.vertices[edge[0]])
            key = (S.canonical_sign(tau_F), S.canonical_sign(tau_Fe), S.canonical_sign(e), quad)
            if key in seen:
                continue
            seen.add(key)
            clauses.append(
                HFacetEdgeSet(
                    k,
                    edge,
                    quad,
                    LineFamily(tau_F, False),
                    LineFamily(tau_Fe, quad),
                    LineFamily(e, True),
                )
            )
    return HSet(A, tuple(clauses), HKind.PLANES_3D)


def h3_membership(H: HSet, t) -> bool:
    if H.kind is not HKind.PLANES_3D:
        raise DimensionMismatch("not a 3D H-set")
    return h_membership(H, t)


def h3_enumerate(H: HSet, radius=None, radius_sq=None, max_candidates: int = 2_000_000) -> PointSet:
    """Experimental: points of the 3D set within ``radius``.

    Candidates are intersections of three planes with independent normals,
    filtered by exact membership.  Complete only where the set is discrete,
    which is not established in 3D.
    """
    r2 = _exact_radius_sq(radius, radius_sq)
    fams = H.families()
    normals = {}
    for f in fams:
        normals.setdefault(S.canonical_sign(f.normal), f)
    keys = sorted(normals)
    found = set()
    budget = max_candidates
    for a, b, c in itertools.combinations(keys, 3):
        M = (a, b, c)
        det = S.dot(a, S.cross3(b, c))
        if S.is_zero(det):
            continue
        inv = np.array([[float(x) for x in row] for row in _inv(M)])
        ranges = [np.array(list(_offset_range(n, r2))) for n in M]
        size = np.prod([len(r) for r in ranges])
        budget -= size
        if budget < 0:
            raise InputError("h3 enumeration budget exceeded; lower the radius")
        K = np.stack(np.meshgrid(*ranges, indexing="ij"), axis=-1).reshape(-1, 3)
        T = K @ inv.T
        keep = (np.einsum("ij,ij->i", T, T) <= float(r2) + 1e-9) & h_membership_array(H, T, _PREFILTER)
        exact_inv = _inv(M)
        for kvec in K[keep]:
            t = tuple(sum((int(kk) * exact_inv[i][j] for j, kk in enumerate(kvec)), Fraction(0)) for i in range(3))
            found.add(t)
    pts = sorted(t for t in found if S.sgn(S.norm_sq(t) - r2) <= 0 and h_membership(H, t))
    return PointSet.from_points(pts, _exact_box(r2, 3), dim=3)


# -- conditions on candidate spectra -----------------------------------------------

@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    checked: int
    violators: tuple
    violator_count: int


def _differences(L: PointSet) -> list:
    _, reps = _unique_differences(L)
    return [S.sub(L.points[int(j)], L.points[int(i)]) for i, j in reps]


def check_gamma_condition(H: HSet, Gamma: PointSet, max_listed: int = 50) -> ConditionReport:
    """Every nonzero difference of ``Gamma`` must lie in ``H``."""
    if Gamma.dim != H.dim:
        raise DimensionMismatch("point set and H-set dimension differ")
    diffs = _differences(Gamma)
    member = h_membership_many(H, diffs)
    bad = [diffs[i] for i in np.nonzero(~member)[0]]
    return ConditionReport(not bad, len(diffs), tuple(bad[:max_listed]), len(bad))


def check_product_condition(H: HSet, B, L: PointSet, tol: float = 1e-9, max_listed: int = 50) -> ConditionReport:
    """Each nonzero difference ``(s, w)`` needs ``s ∈ H`` or ``w`` a zero of ``ft(B)``."""
    B = as_domain(B)
    n = H.dim
    if L.dim != n + B.dim:
        raise DimensionMismatch(f"point set of dim {L.dim}, expected {n + B.dim}")
    diffs = _differences(L)
    if not diffs:
        return ConditionReport(True, 0, (), 0)
    member = h_membership_many(H, [d[:n] for d in diffs])
    w = np.array([[float(c) for c in d[n:]] for d in diffs])
    zero = np.asarray(ft_is_zero(B, w, tol), dtype=bool).reshape(-1)
    bad_idx = np.nonzero(~(member | zero))[0]
    bad = [diffs[i] for i in bad_idx]
    return ConditionReport(not bad, len(diffs), tuple(bad[:max_listed]), len(bad))
