"""Spectra of product domains ``A × B`` and their cut-and-project slices.

Given a spectrum ``Λ ⊂ R^n × R^m`` of ``A × B`` and an open ``W ⊂ R^n``,
``Γ(Λ, W + x)`` projects to ``R^m`` the points of ``Λ`` whose first block
lies in ``W + x``.  When ``Λ`` is W-compatible and ``|W| = 1/|A|``, almost
every such slice is a spectrum of ``B``; :func:`theorem4_audit` replays the
argument numerically step by step.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from . import scalar as S
from .errors import DimensionMismatch, InsufficientWindow
from .fourier import Interval, as_domain, is_zero as ft_is_zero
from .geometry import ConvexPolygon, hexagon, measure as geo_measure, unit_square
from .packing import (
    GridSpec,
    Indicator,
    PowerFunction,
    TensorFunction,
    TilingReport,
    as_region,
    delta_set,
    lattice_sums,
    near_boundary,
    packing_check,
    region_contains,
    region_contains_array,
    tiling_check,
)
from .pointsets import (
    OrthogonalityReport,
    PointSet,
    check_orthogonality,
    dual_basis,
    integer_window,
    lattice_window,
    product_pointset,
)
from .scalar import Scalar
from .windows import Window, canonical_window

THREADS_ENV = "SPECTRA_KIT_THREADS"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _as_window_region(W):
    if isinstance(W, Window):
        return W.original_region()
    return as_region(W)


def contains_many(R, points: Sequence, margin: float = 1e-9) -> np.ndarray:
    """Open-set membership for many points; exact near the boundary."""
    if not len(points):
        return np.zeros(0, dtype=bool)
    arr = np.array([[float(c) for c in p] for p in points])
    out = region_contains_array(R, arr)
    for i in np.nonzero(near_boundary(R, arr, margin))[0]:
        out[i] = region_contains(R, points[i])
    return out


# -- W-compatibility ---------------------------------------------------------------

@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    checked: int
    violators: tuple
    violator_count: int


def _near_pairs(first: np.ndarray, radius: float) -> np.ndarray:
    """Index pairs ``i < j`` whose first blocks are within sup-distance ``radius``."""
    tree = cKDTree(first)
    return tree.query_pairs(radius, p=np.inf, output_type="ndarray")


def w_compatible(L: PointSet, W, B, tol: float = 1e-9, max_listed: int = 50) -> CompatibilityReport:
    """Every nonzero difference ``(s, w)`` needs ``s ∉ Δ(W)`` or ``ft(B, w) = 0``.

    Only pairs whose first-block difference lies in the bounding box of
    ``Δ(W)`` can violate the condition, so those are found with a k-d tree;
    ``checked`` counts the distinct differences examined.
    """
    R = _as_window_region(W)
    B = as_domain(B)
    n = R.dim
    if L.dim != n + B.dim:
        raise DimensionMismatch(f"point set of dim {L.dim}, expected {n + B.dim}")
    if len(L) < 2:
        return CompatibilityReport(True, 0, (), 0)
    D = delta_set(R)
    reach = max(max(abs(float(lo)), abs(float(hi))) for lo, hi in D.bounding_box())
    pairs = _near_pairs(L.array[:, :n], reach)
    if not len(pairs):
        return CompatibilityReport(True, 0, (), 0)
    d = L.array[pairs[:, 1]] - L.array[pairs[:, 0]]
    _, first = np.unique(np.round(d / 1e-10).astype(np.int64), axis=0, return_index=True)
    reps = pairs[np.sort(first)]
    diffs = [S.sub(L.points[int(j)], L.points[int(i)]) for i, j in reps]
    in_delta = contains_many(D, [q[:n] for q in diffs])
    w = np.array([[float(c) for c in q[n:]] for q in diffs])
    zero = np.asarray(ft_is_zero(B, w, tol), dtype=bool).reshape(-1)
    bad = [diffs[i] for i in np.nonzero(in_delta & ~zero)[0]]
    return CompatibilityReport(not bad, len(diffs), tuple(bad[:max_listed]), len(bad))


# -- cut and project -----------------------------------------------------------------

@dataclass(frozen=True)
class CutProjectResult:
    x: tuple
    injective: bool
    gamma: PointSet
    collisions: tuple
    diagnostic: Optional[str] = None
    selected: int = 0


def _first_block_covers(L: PointSet, R, x) -> bool:
    n = R.dim
    bb = R.bounding_box()
    return all(
        S.sgn(L.box[k][0] - (bb[k][0] + x[k])) <= 0 and S.sgn((bb[k][1] + x[k]) - L.box[k][1]) <= 0
        for k in range(n)
    )


def cut_project(L: PointSet, W, x) -> CutProjectResult:
    """Project to the last block the points of ``L`` whose first block lies in ``W + x``."""
    R = _as_window_region(W)
    n = R.dim
    x = S.to_vec(x)
    if len(x) != n:
        raise DimensionMismatch("shift and window dimension differ")
    m = L.dim - n
    if m <= 0:
        raise DimensionMismatch("point set has no second block")
    if len(L):
        xf = np.array([float(c) for c in x])
        rel = L.array[:, :n] - xf
        mask = region_contains_array(R, rel)
        for i in np.nonzero(near_boundary(R, rel, 1e-9))[0]:
            mask[i] = region_contains(R, S.sub(L.points[i][:n], x))
        sel = np.nonzero(mask)[0]
    else:
        sel = np.zeros(0, dtype=int)
    chosen = [L.points[int(i)] for i in sel]
    by_v = {}
    collisions = []
    for p in chosen:
        v = p[n:]
        if v in by_v:
            collisions.append((by_v[v], p))
        else:
            by_v[v] = p
    box = L.box[n:]
    diagnostic = None
    if not _first_block_covers(L, R, x):
        diagnostic = "InsufficientWindow"
    elif collisions:
        diagnostic = "NonInjective"
    gamma = PointSet.from_points(list(by_v), box, dim=m)
    return CutProjectResult(x, not collisions, gamma, tuple(collisions), diagnostic, len(chosen))


def step2_sums(L: PointSet, W, B, x, ys) -> tuple:
    """``Σ_λ 1_{−W}(x − λ₁)·power(B, y − λ₂)`` computed over all of ``L`` and over the slice.

    Returns ``(full, via_gamma)`` arrays over ``ys``.
    """
    R = _as_window_region(W)
    B = as_domain(B)
    x = S.to_vec(x)
    ys = np.asarray(ys, dtype=float).reshape(-1, B.dim)
    xf = np.array([float(c) for c in x])
    g = TensorFunction(Indicator(R.reflect()), PowerFunction(B))
    X = np.hstack([np.tile(xf, (len(ys), 1)), ys])
    full = lattice_sums(g, L, X, [np.inf])[0]
    cut = cut_project(L, R, x)
    via = lattice_sums(PowerFunction(B), cut.gamma, ys, [np.inf])[0] if len(cut.gamma) else np.zeros(len(ys))
    return full, via


# -- jobs -------------------------------------------------------------------------------

@dataclass
class ProductSpectrumJob:
    """Inputs of the extraction pipeline and of the audit.

    ``W`` is a :class:`Window` or a region in the coordinates of ``A``.  Shift
    samples come from ``x_samples`` or are drawn uniformly from
    ``sample_box`` with ``seed``.
    """

    A: object
    B: object
    L: PointSet
    W: object
    x_samples: Optional[Sequence] = None
    n_samples: int = 20
    seed: int = 0
    sample_box: Optional[Sequence] = None
    tol_orth: float = 1e-9
    tol_tile: float = 5e-3
    gamma_grid_steps: int = 200
    audit_grid_steps: int = 8
    audit_truncation: Optional[float] = None
    compat_tol: float = 1e-9

    def __post_init__(self):
        self.B = as_domain(self.B)
        self.region = _as_window_region(self.W)
        n = self.region.dim
        if self.L.dim != n + self.B.dim:
            raise DimensionMismatch(f"Λ has dim {self.L.dim}, expected {n} + {self.B.dim}")
        a_dim = 2 if isinstance(self.A, ConvexPolygon) else as_domain(self.A).dim
        if a_dim != n:
            raise DimensionMismatch("window and A differ in dimension")

    @property
    def n(self) -> int:
        return self.region.dim

    @property
    def m(self) -> int:
        return self.B.dim

    def samples(self) -> list:
        if self.x_samples is not None:
            return [S.to_vec(x) for x in self.x_samples]
        box = self.sample_box or [(0, 1)] * self.n
        rng = np.random.default_rng(self.seed)
        lo = np.array([float(b[0]) for b in box])
        hi = np.array([float(b[1]) for b in box])
        return [tuple(float(c) for c in lo + rng.random(self.n) * (hi - lo)) for _ in range(self.n_samples)]

    def a_measure(self) -> Scalar:
        return geo_measure(self.A) if isinstance(self.A, ConvexPolygon) else as_domain(self.A).measure

    def a_domain(self):
        return as_domain(self.A)

    def w_measure(self) -> Scalar:
        return self.region.measure


@dataclass(frozen=True)
class FactorSample:
    x: tuple
    cut: CutProjectResult
    tiling: Optional[TilingReport]
    orthogonality: Optional[OrthogonalityReport]
    ok: bool
    diagnostic: Optional[str]


def _gamma_grid(job: ProductSpectrumJob) -> GridSpec:
    return GridSpec([(0, 1)] * job.m, job.gamma_grid_steps if job.m == 1 else max(4, int(job.gamma_grid_steps ** (1 / job.m))), job.seed)


def _process_sample(job: ProductSpectrumJob, x) -> FactorSample:
    cut = cut_project(job.L, job.region, x)
    if cut.diagnostic == "InsufficientWindow" or not len(cut.gamma):
        return FactorSample(cut.x, cut, None, None, False, "InsufficientWindow")
    orth = check_orthogonality(job.B, cut.gamma, job.tol_orth)
    try:
        tile = tiling_check(job.B, cut.gamma, _gamma_grid(job), tol=job.tol_tile)
    except InsufficientWindow:
        return FactorSample(cut.x, cut, None, orth, False, "InsufficientWindow")
    ok = cut.injective and orth.ok and tile.ok
    return FactorSample(cut.x, cut, tile, orth, ok, cut.diagnostic)


def extract_factor_spectrum(job: ProductSpectrumJob) -> list:
    """Cut, project and verify one slice per shift sample, in sample order."""
    xs = job.samples()
    workers = _threads()
    if workers == 1:
        return [_process_sample(job, x) for x in xs]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(lambda x: _process_sample(job, x), xs))


# -- audit -------------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditStep:
    step: int
    name: str
    passed: Optional[bool]
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AuditReport:
    steps: tuple
    w_measure: Scalar
    a_measure_inverse: Scalar
    measures_equal: bool

    @property
    def passed(self) -> bool:
        return all(s.passed is not False for s in self.steps)

    def step(self, k: int) -> AuditStep:
        return next(s for s in self.steps if s.step == k)


def _audit_grid(job: ProductSpectrumJob) -> GridSpec:
    box = list(job.sample_box or [(0, 1)] * job.n) + [(0, 1)] * job.m
    return GridSpec(box, job.audit_grid_steps, job.seed)


def theorem4_audit(job: ProductSpectrumJob) -> AuditReport:
    """Replay the six steps for ``job`` and report each verdict.

    1. W-compatibility and injectivity of the slices at the samples.
    2. ``(1_{−W} ⊗ power(B)) + Λ`` packs.
    3. ``(power(A) ⊗ power(B)) + Λ`` tiles.
    4. ``|W| <= 1/|A|`` (exact when rational), from comparing integrals.
    5. ``(1_{−W} ⊗ power(B)) + Λ`` tiles, checked when ``|W| = 1/|A|``.
    6. Every sampled slice is a spectrum of ``B``.
    """
    steps = []
    compat = w_compatible(job.L, job.region, job.B, job.compat_tol)
    samples = extract_factor_spectrum(job)
    injective = all(s.cut.injective for s in samples)
    steps.append(AuditStep(1, "W-compatibility and injectivity", compat.ok and injective, {
        "violators": compat.violator_count,
        "differences_checked": compat.checked,
        "non_injective_samples": sum(not s.cut.injective for s in samples),
    }))

    g = TensorFunction(Indicator(job.region.reflect()), PowerFunction(job.B))
    grid = _audit_grid(job)
    pack = packing_check(g, job.L, grid)
    steps.append(AuditStep(2, "packing of 1_{-W} x power(B)", pack.ok, {"report": pack}))

    f = TensorFunction(PowerFunction(job.a_domain()), PowerFunction(job.B))
    try:
        tile_f = tiling_check(f, job.L, grid, tol=job.tol_tile, truncation_radius=job.audit_truncation)
        steps.append(AuditStep(3, "tiling of power(A) x power(B)", tile_f.ok, {"report": tile_f}))
    except InsufficientWindow as exc:
        steps.append(AuditStep(3, "tiling of power(A) x power(B)", None, {"skipped": str(exc)}))

    wm = job.w_measure()
    am = job.a_measure()
    inv_a = 1 / am if isinstance(am, Fraction) else 1.0 / float(am)
    exact = isinstance(wm, Fraction) and isinstance(inv_a, Fraction)
    le = S.sgn(wm - inv_a) <= 0
    equal = S.eq(wm, inv_a)
    steps.append(AuditStep(4, "measure inequality |W| <= 1/|A|", le, {
        "integral_g": wm * (1 / job.B.measure),
        "integral_f": inv_a * (1 / job.B.measure),
        "equal": equal,
        "exact": exact,
    }))

    if equal:
        try:
            tile_g = tiling_check(g, job.L, grid, tol=job.tol_tile, truncation_radius=job.audit_truncation)
            steps.append(AuditStep(5, "tiling of 1_{-W} x power(B)", tile_g.ok, {"report": tile_g}))
        except InsufficientWindow as exc:
            steps.append(AuditStep(5, "tiling of 1_{-W} x power(B)", None, {"skipped": str(exc)}))
    else:
        steps.append(AuditStep(5, "tiling of 1_{-W} x power(B)", None, {"skipped": "measures differ"}))

    steps.append(AuditStep(6, "slices are spectra of B", all(s.ok for s in samples), {
        "samples": len(samples),
        "failed": tuple(s.x for s in samples if not s.ok),
    }))
    return AuditReport(tuple(steps), wm, inv_a, equal)


# -- bundled jobs ---------------------------------------------------------------------

def hexagon_dual_basis() -> list:
    """Dual basis of the hexagon tiling lattice generated by (1, 0) and (1/2, 3/2)."""
    return dual_basis([(1, 0), (Fraction(1, 2), Fraction(3, 2))])


def hexagon_interval_job(
    radius: int = 8,
    K: int = 10,
    shifts: Optional[dict] = None,
    W=None,
    **kwargs,
) -> ProductSpectrumJob:
    """Hexagon (0, 1) times ``[-1/2, 1/2]`` with ``Λ = {(d, k + φ(d))}``.

    ``d`` runs over the dual lattice in ``[-radius, radius + 1]^2`` and ``k``
    over ``[-K, K]``.  ``φ`` defaults to 0 (the plain product spectrum);
    ``shifts="random"`` draws rational ``φ(d)`` from the job seed, which keeps
    ``Λ`` a spectrum because distinct ``d`` are already orthogonal.
    """
    A = hexagon()
    D = lattice_window(hexagon_dual_basis(), [(-radius, radius + 1)] * 2)
    seed = kwargs.get("seed", 0)
    if shifts == "random":
        rng = np.random.default_rng(seed)
        phi = {d: Fraction(int(rng.integers(0, 7)), 7) for d in D.points}
    else:
        phi = shifts or {}
    pts = [d + (k + phi.get(d, Fraction(0)),) for d in D.points for k in range(-K, K + 1)]
    box = list(D.box) + [(-K, K + 1)]
    L = PointSet.from_points(pts, box)
    return ProductSpectrumJob(A, Interval(Fraction(-1, 2), Fraction(1, 2)), L, W or canonical_window(A), **kwargs)


def square_interval_job(radius: int = 6, K: int = 12, **kwargs) -> ProductSpectrumJob:
    """Unit square times ``[-1/2, 1/2]`` with ``Λ = Z^3`` truncated."""
    A = unit_square()
    Z2 = integer_window(2, radius)
    Z1 = PointSet.from_points([(k,) for k in range(-K, K + 1)], [(-K, K)])
    L = product_pointset(Z2, Z1)
    return ProductSpectrumJob(A, Interval(Fraction(-1, 2), Fraction(1, 2)), L, canonical_window(A), **kwargs)
