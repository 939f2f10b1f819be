"""Difference sets of open regions and packing/tiling verification of ``f + Λ``.

The verifiers evaluate ``S(x) = Σ_λ f(x − λ)`` on jittered grids.  For power
functions the lattice sum has a slowly decaying ``O(1/R)`` tail in the
truncation radius ``R``; by default :func:`tiling_check` removes the leading
term by Richardson extrapolation ``2·S(R) − S(R/2)`` and reports the size of
the remaining correction separately from the deviation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import scalar as S
from .errors import DimensionMismatch, InputError, InsufficientWindow, Unsupported
from .fourier import Interval, BoxUnion, PolygonDomain, Product, as_domain, power
from .geometry import ConvexPolygon, measure as polygon_measure, validate_polygon
from .pointsets import PointSet
from .scalar import Scalar

TOL_PACK_INDICATOR = 1e-6
TOL_PACK_POWER = 1e-3
TOL_TILE = 5e-3
TAIL_BOUND = 1e-3


# -- regions ---------------------------------------------------------------------

def _box(b) -> tuple:
    out = tuple((S.to_scalar(lo), S.to_scalar(hi)) for lo, hi in b)
    if any(S.sgn(hi - lo) <= 0 for lo, hi in out):
        raise InputError("box sides must satisfy lo < hi")
    return out


def _boxes_overlap(a, b) -> bool:
    return all(S.sgn(min(ah, bh) - max(al, bl)) > 0 for (al, ah), (bl, bh) in zip(a, b))


@dataclass(frozen=True)
class OpenBoxUnion:
    """Finite union of open axis-aligned boxes.

    User-facing windows are validated as pairwise disjoint; difference sets
    are built with ``disjoint=False`` since their pieces may overlap.
    """

    boxes: tuple
    disjoint: bool = True

    def __post_init__(self):
        boxes = tuple(_box(b) for b in self.boxes)
        if not boxes:
            raise InputError("empty box union")
        if len({len(b) for b in boxes}) != 1:
            raise DimensionMismatch("boxes of mixed dimension")
        if self.disjoint:
            for a, b in itertools.combinations(boxes, 2):
                if _boxes_overlap(a, b):
                    raise InputError("boxes overlap")
        object.__setattr__(self, "boxes", boxes)

    @property
    def dim(self) -> int:
        return len(self.boxes[0])

    @property
    def measure(self) -> Scalar:
        if not self.disjoint:
            raise Unsupported("measure of an overlapping box union")
        total = Fraction(0)
        for b in self.boxes:
            vol = Fraction(1)
            for lo, hi in b:
                vol = vol * (hi - lo)
            total = total + vol
        return total

    def bounding_box(self) -> tuple:
        return tuple((min(b[k][0] for b in self.boxes), max(b[k][1] for b in self.boxes)) for k in range(self.dim))

    def reflect(self) -> "OpenBoxUnion":
        return OpenBoxUnion(tuple(tuple((-hi, -lo) for lo, hi in b) for b in self.boxes), self.disjoint)


@dataclass(frozen=True)
class OpenConvexPolygon:
    """Interior of a convex polygon."""

    polygon: ConvexPolygon

    dim = 2

    @property
    def measure(self) -> Scalar:
        return polygon_measure(self.polygon)

    def bounding_box(self) -> tuple:
        vs = self.polygon.vertices
        return tuple((min(v[k] for v in vs), max(v[k] for v in vs)) for k in range(2))

    def reflect(self) -> "OpenConvexPolygon":
        return OpenConvexPolygon(validate_polygon([S.neg(v) for v in self.polygon.vertices]))


Region = Union[OpenBoxUnion, OpenConvexPolygon]


def open_box(*sides) -> OpenBoxUnion:
    """``open_box((lo, hi), (lo, hi), ...)``."""
    return OpenBoxUnion((tuple(sides),))


def open_rectangle(half_u, half_v) -> OpenBoxUnion:
    """Origin-symmetric rectangle ``|u| < half_u, |v| < half_v``."""
    hu, hv = S.to_scalar(half_u), S.to_scalar(half_v)
    return open_box((-hu, hu), (-hv, hv))


def as_region(obj) -> Region:
    if isinstance(obj, (OpenBoxUnion, OpenConvexPolygon)):
        return obj
    if isinstance(obj, ConvexPolygon):
        return OpenConvexPolygon(obj)
    region = getattr(obj, "region", None)  # windows carry a region
    if region is not None:
        return as_region(region)
    raise TypeError(f"{type(obj).__name__} is not a region")


def region_contains(W, x) -> bool:
    """Open-set membership; exact for rational input."""
    W = as_region(W)
    x = S.to_vec(x)
    if len(x) != W.dim:
        raise DimensionMismatch("point and region dimension differ")
    if isinstance(W, OpenBoxUnion):
        return any(all(S.sgn(c - lo) > 0 and S.sgn(hi - c) > 0 for c, (lo, hi) in zip(x, b)) for b in W.boxes)
    vs = W.polygon.vertices
    n = len(vs)
    return all(S.sgn(S.cross2(S.sub(vs[(i + 1) % n], vs[i]), S.sub(x, vs[i]))) > 0 for i in range(n))


def region_contains_array(W, X, tol: float = 0.0) -> np.ndarray:
    """Vectorized float membership; points within ``tol`` of the boundary count as outside."""
    W = as_region(W)
    X = np.asarray(X, dtype=float)
    if X.shape[-1] != W.dim:
        raise DimensionMismatch("point and region dimension differ")
    if isinstance(W, OpenBoxUnion):
        out = np.zeros(X.shape[:-1], dtype=bool)
        for b in W.boxes:
            lo = np.array([float(c[0]) for c in b])
            hi = np.array([float(c[1]) for c in b])
            out |= np.all((X > lo + tol) & (X < hi - tol), axis=-1)
        return out
    vs = np.array([[float(c) for c in v] for v in W.polygon.vertices])
    e = np.roll(vs, -1, axis=0) - vs
    lens = np.linalg.norm(e, axis=1)
    rel = X[..., None, :] - vs
    cr = e[:, 0] * rel[..., 1] - e[:, 1] * rel[..., 0]
    return np.all(cr > tol * lens, axis=-1)


def near_boundary(W, X, eps: float) -> np.ndarray:
    """True where membership flips between the ``eps``-shrunk and ``eps``-grown region."""
    return region_contains_array(W, X, tol=-eps) != region_contains_array(W, X, tol=eps)


# -- difference sets ------------------------------------------------------------

def _hull(points) -> list:
    """Exact convex hull (monotone chain), counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and S.sgn(S.cross2(S.sub(out[-1], out[-2]), S.sub(p, out[-2]))) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    return lower[:-1] + upper[:-1]


def delta_set(W) -> Region:
    """``Δ(W) = W − W`` for an open region ``W``.

    Box unions give the union of pairwise box differences.  An origin-symmetric
    polygon gives ``2W``; any other convex polygon gives the exact hull of the
    vertex differences.
    """
    W = as_region(W)
    if isinstance(W, OpenBoxUnion):
        pieces = []
        for a in W.boxes:
            for b in W.boxes:
                d = tuple((alo - bhi, ahi - blo) for (alo, ahi), (blo, bhi) in zip(a, b))
                if d not in pieces:
                    pieces.append(d)
        return OpenBoxUnion(tuple(pieces), disjoint=False)
    P = W.polygon
    c = P.symmetry_center
    if c is not None and all(S.is_zero(x) for x in c):
        return OpenConvexPolygon(validate_polygon([S.scale(2, v) for v in P.vertices]))
    diffs = [S.sub(p, q) for p in P.vertices for q in P.vertices]
    return OpenConvexPolygon(validate_polygon(_hull(diffs)))


def delta_membership(W, x) -> bool:
    """Exact test of ``x ∈ Δ(W)`` (rational input); tolerance-based for floats."""
    return region_contains(delta_set(W), x)


# -- functions summed over Λ --------------------------------------------------

class PowerFunction:
    """``power(Ω, ·)``; integrates to ``1/|Ω|``."""

    kind = "power"

    def __init__(self, domain):
        self.domain = as_domain(domain)
        self.dim = self.domain.dim
        m = self.domain.measure
        self.integral = 1 / m if isinstance(m, Fraction) else 1.0 / float(m)

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return _power_array(self.domain, np.asarray(X, dtype=float))

    def __repr__(self):
        return f"PowerFunction({self.domain!r})"


def _axis_box(dom):
    """The single box equal to ``dom`` when it is one (interval, box, axis-aligned rectangle)."""
    if isinstance(dom, Interval):
        return ((dom.lo, dom.hi),)
    if isinstance(dom, BoxUnion) and len(dom.boxes) == 1:
        return dom.boxes[0]
    if isinstance(dom, PolygonDomain) and dom.polygon.n == 4:
        vs = dom.polygon.vertices
        xs, ys = sorted({v[0] for v in vs}), sorted({v[1] for v in vs})
        if len(xs) == 2 and len(ys) == 2:
            return ((xs[0], xs[1]), (ys[0], ys[1]))
    return None


def _power_array(dom, X: np.ndarray) -> np.ndarray:
    # products factor and single boxes reduce to real sinc², avoiding complex exponentials
    if isinstance(dom, Product):
        k = dom.first.dim
        return _power_array(dom.first, X[..., :k]) * _power_array(dom.second, X[..., k:])
    box = _axis_box(dom)
    if box is not None:
        out = np.ones(X.shape[:-1])
        for j, (lo, hi) in enumerate(box):
            out = out * np.sinc(float(hi - lo) * X[..., j]) ** 2
        return out
    return np.asarray(power(dom, X), dtype=float)


class Indicator:
    """Indicator of an open region; integrates to its measure."""

    kind = "indicator"

    def __init__(self, region):
        self.region = as_region(region)
        self.dim = self.region.dim
        self.integral = self.region.measure

    def __call__(self, X: np.ndarray) -> np.ndarray:
        return region_contains_array(self.region, X).astype(float)

    def __repr__(self):
        return f"Indicator({self.region!r})"


class TensorFunction:
    """``(f ⊗ g)(s, w) = f(s)·g(w)``."""

    def __init__(self, first, second):
        self.first, self.second = as_function(first), as_function(second)
        self.dim = self.first.dim + self.second.dim
        kinds = {self.first.kind, self.second.kind}
        self.kind = kinds.pop() if len(kinds) == 1 else "mixed"
        self.integral = self.first.integral * self.second.integral

    def __call__(self, X: np.ndarray) -> np.ndarray:
        k = self.first.dim
        return self.first(X[..., :k]) * self.second(X[..., k:])

    def __repr__(self):
        return f"TensorFunction({self.first!r}, {self.second!r})"


def as_function(obj):
    """Domains become power functions, regions become indicators."""
    if isinstance(obj, (PowerFunction, Indicator, TensorFunction)):
        return obj
    if isinstance(obj, (OpenBoxUnion, OpenConvexPolygon)) or hasattr(obj, "region"):
        return Indicator(obj)
    return PowerFunction(obj)


# -- grids and reports --------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Jittered sample grid: one sample per cell, uniform in the middle 90% of the cell."""

    box: tuple
    steps_per_axis: tuple
    jitter_seed: int = 0

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        steps = self.steps_per_axis
        steps = tuple(int(s) for s in steps) if isinstance(steps, (tuple, list)) else (int(steps),) * len(box)
        if len(steps) != len(box):
            raise DimensionMismatch("steps_per_axis and box differ in dimension")
        if any(s <= 0 for s in steps):
            raise InputError("grid steps must be positive")
        if any(hi <= lo for lo, hi in box):
            raise InputError("grid box sides must satisfy lo < hi")
        object.__setattr__(self, "box", box)
        object.__setattr__(self, "steps_per_axis", steps)
        object.__setattr__(self, "jitter_seed", int(self.jitter_seed))

    @property
    def dim(self) -> int:
        return len(self.box)

    def samples(self) -> np.ndarray:
        rng = np.random.default_rng(self.jitter_seed)
        axes = [np.arange(s) for s in self.steps_per_axis]
        idx = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, self.dim)
        lo = np.array([b[0] for b in self.box])
        width = np.array([(b[1] - b[0]) / s for b, s in zip(self.box, self.steps_per_axis)])
        jitter = rng.uniform(0.05, 0.95, size=idx.shape)
        return lo + (idx + jitter) * width


@dataclass(frozen=True)
class TilingReport:
    kind: str  # "Packing" or "Tiling"
    ok: bool
    max_sum: float
    min_interior_sum: float
    max_abs_dev_from_1: float
    grid: GridSpec
    truncation_radius: float
    tolerance: float
    samples: int
    raw_max_abs_dev: float
    tail_estimate: Optional[float]
    tail_bound: float
    tail_within_bound: Optional[bool]
    tail_correction: str
    points_used: int


def _lambda_array(L: PointSet, dim: int) -> np.ndarray:
    if L.dim != dim:
        raise DimensionMismatch(f"point set of dim {L.dim} for a function of dim {dim}")
    return L.array


def _max_radius(L: PointSet, grid: GridSpec) -> float:
    lb = L.box_array()
    gb = np.array(grid.box)
    return float(np.min(np.minimum(gb[:, 0] - lb[:, 0], lb[:, 1] - gb[:, 1])))


def _chunk_rows(n_lambda: int) -> int:
    return max(1, int(4_000_000 // max(n_lambda, 1)))


def lattice_sums(f, L: PointSet, X: np.ndarray, radii: Sequence[float]) -> np.ndarray:
    """``Σ_{|x−λ|_∞ <= r} f(x − λ)`` for each sample ``x`` and radius ``r``.

    Returns shape ``(len(radii), len(X))``; ``r = inf`` sums every point.
    """
    f = as_function(f)
    lam = _lambda_array(L, f.dim)
    X = np.asarray(X, dtype=float).reshape(-1, f.dim)
    radii = np.asarray(radii, dtype=float)
    out = np.zeros((len(radii), len(X)))
    if not len(lam):
        return out
    rmax = float(radii.max())
    step = _chunk_rows(len(lam))
    for start in range(0, len(X), step):
        x = X[start:start + step]
        diff = x[:, None, :] - lam[None, :, :]
        dist = np.max(np.abs(diff), axis=-1)
        keep = np.any(dist <= rmax, axis=0) if math.isfinite(rmax) else slice(None)
        diff, dist = diff[:, keep], dist[:, keep]
        vals = f(diff)
        for i, r in enumerate(radii):
            out[i, start:start + step] = vals.sum(axis=1) if not math.isfinite(r) else np.where(dist <= r, vals, 0.0).sum(axis=1)
    return out


def packing_check(f, L: PointSet, grid: GridSpec, tol: Optional[float] = None) -> TilingReport:
    """Check ``Σ_λ f(x − λ) <= 1`` on the grid.

    ``f`` is a Domain (power function), a Region (indicator) or a function
    object from this module.  Every point of ``L`` is summed.
    """
    f = as_function(f)
    if grid.dim != f.dim:
        raise DimensionMismatch("grid and function dimension differ")
    if tol is None:
        tol = TOL_PACK_INDICATOR if f.kind == "indicator" else TOL_PACK_POWER
    X = grid.samples()
    s = lattice_sums(f, L, X, [math.inf])[0]
    dev = float(np.max(np.abs(s - 1)))
    return TilingReport(
        kind="Packing",
        ok=bool(s.max() <= 1 + tol),
        max_sum=float(s.max()),
        min_interior_sum=float(s.min()),
        max_abs_dev_from_1=dev,
        grid=grid,
        truncation_radius=math.inf,
        tolerance=float(tol),
        samples=len(X),
        raw_max_abs_dev=dev,
        tail_estimate=None,
        tail_bound=TAIL_BOUND,
        tail_within_bound=None,
        tail_correction="none",
        points_used=len(L),
    )


def tiling_check(
    f,
    L: PointSet,
    grid: GridSpec,
    tol: float = TOL_TILE,
    truncation_radius: Optional[float] = None,
    tail_correction: str = "richardson",
    tail_bound: float = TAIL_BOUND,
) -> TilingReport:
    """Check ``Σ_λ f(x − λ) = 1`` on the grid.

    Each sample sums the points of ``L`` within sup-distance
    ``truncation_radius`` (default: the largest radius for which that
    neighbourhood stays inside ``L``'s validity box).  ``truncation_radius=inf``
    sums all of ``L`` with no window check.

    With ``tail_correction="richardson"`` the reported sums are
    ``C(R) = 2·S(R) − S(R/2)`` and ``tail_estimate = max|C(R) − C(R/2)|/3``,
    the usual error estimate for a second-order remainder; with ``"none"``
    sums are raw and ``tail_estimate = max|S(R) − S(R/2)|``.  The verdict is
    ``deviation <= tol``; the tail is reported against ``tail_bound``
    separately.
    """
    f = as_function(f)
    if grid.dim != f.dim:
        raise DimensionMismatch("grid and function dimension differ")
    if tail_correction not in ("richardson", "none"):
        raise InputError(f"unknown tail correction {tail_correction!r}")
    avail = _max_radius(L, grid)
    R = avail if truncation_radius is None else float(truncation_radius)
    if math.isfinite(R):
        if R <= 0 or R > avail + 1e-12:
            raise InsufficientWindow(
                f"point window supports truncation radius {avail:g} around the grid, {R:g} requested"
            )
    elif tail_correction != "none":
        raise InputError("an infinite truncation radius needs tail_correction='none'")
    X = grid.samples()
    if math.isfinite(R):
        sums = lattice_sums(f, L, X, [R, R / 2, R / 4])
        raw = sums[0]
        if tail_correction == "richardson":
            s = 2 * sums[0] - sums[1]
            tail = float(np.max(np.abs(s - (2 * sums[1] - sums[2])))) / 3
        else:
            s = raw
            tail = float(np.max(np.abs(sums[0] - sums[1])))
    else:
        raw = s = lattice_sums(f, L, X, [math.inf])[0]
        tail = None
    dev = float(np.max(np.abs(s - 1)))
    ok = dev <= tol
    return TilingReport(
        kind="Tiling",
        ok=bool(ok),
        max_sum=float(s.max()),
        min_interior_sum=float(s.min()),
        max_abs_dev_from_1=dev,
        grid=grid,
        truncation_radius=R,
        tolerance=float(tol),
        samples=len(X),
        raw_max_abs_dev=float(np.max(np.abs(raw - 1))),
        tail_estimate=tail,
        tail_bound=float(tail_bound),
        tail_within_bound=None if tail is None else bool(tail <= tail_bound),
        tail_correction=tail_correction,
        points_used=len(L),
    )


def sum_profile(f, L: PointSet, grid: GridSpec, truncation_radius: Optional[float] = None) -> tuple:
    """Sample points and Richardson-corrected sums, for plot data."""
    f = as_function(f)
    X = grid.samples()
    R = _max_radius(L, grid) if truncation_radius is None else float(truncation_radius)
    if not math.isfinite(R):
        return X, lattice_sums(f, L, X, [math.inf])[0]
    sums = lattice_sums(f, L, X, [R, R / 2])
    return X, 2 * sums[0] - sums[1]
