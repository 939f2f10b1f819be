"""Finite windows of candidate spectra.

A :class:`PointSet` is only asserted to be correct inside its validity box;
every derived set carries a box so truncation effects stay attributable.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from . import scalar as S
from .errors import DimensionMismatch, EmptySet, InputError, TooFew
from .fourier import as_domain, ft

DEDUP_TOL = 1e-10


def _quantize(arr: np.ndarray) -> np.ndarray:
    return np.round(arr / DEDUP_TOL).astype(np.int64)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite point set with an axis-aligned validity box.

    ``points`` holds exact tuples when every coordinate is rational (else
    floats); ``array`` is the float view used by numerical kernels.
    """

    points: tuple
    box: tuple
    array: np.ndarray

    @classmethod
    def from_points(cls, points, box=None, *, dim: Optional[int] = None) -> "PointSet":
        pts = [S.to_vec(p) if not isinstance(p, np.ndarray) else S.to_vec(p.tolist()) for p in points]
        if not pts:
            if box is None and dim is None:
                raise InputError("an empty point set needs a box or a dimension")
            d = dim if dim is not None else len(box)
            box = tuple((S.to_scalar(lo), S.to_scalar(hi)) for lo, hi in box) if box else tuple((Fraction(0), Fraction(0)) for _ in range(d))
            return cls((), box, np.zeros((0, d)))
        d = len(pts[0])
        if any(len(p) != d for p in pts):
            raise DimensionMismatch("points of mixed dimension")
        exact = S.is_exact(pts)
        if not exact:
            pts = [tuple(float(c) for c in p) for p in pts]
        arr = np.array([[float(c) for c in p] for p in pts], dtype=float).reshape(len(pts), d)
        # deduplicate (exactly, or within DEDUP_TOL for floats), keep first
        if exact:
            seen, kept = set(), []
            for i, p in enumerate(pts):
                if p not in seen:
                    seen.add(p)
                    kept.append(i)
            keep = np.array(kept, dtype=int)
        else:
            _, first = np.unique(_quantize(arr), axis=0, return_index=True)
            keep = np.sort(first)
        pts = [pts[i] for i in keep]
        arr = arr[keep]
        if box is None:
            box = tuple((min(p[k] for p in pts), max(p[k] for p in pts)) for k in range(d))
        else:
            box = tuple((S.to_scalar(lo), S.to_scalar(hi)) for lo, hi in box)
            if len(box) != d:
                raise DimensionMismatch("box dimension differs from point dimension")
            lo = np.array([float(b[0]) for b in box]) - 1e-12
            hi = np.array([float(b[1]) for b in box]) + 1e-12
            if np.any(arr < lo) or np.any(arr > hi):
                raise InputError("points outside the validity box")
        return cls(tuple(pts), box, arr)

    @property
    def dim(self) -> int:
        return len(self.box)

    @property
    def exact(self) -> bool:
        return S.is_exact(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.box == other.box and set(self.points) == set(other.points)

    def __hash__(self):
        return hash((self.box, frozenset(self.points)))

    def box_array(self) -> np.ndarray:
        return np.array([[float(lo), float(hi)] for lo, hi in self.box])

    def restrict(self, box) -> "PointSet":
        """Points inside the closed ``box``; the new validity box is ``box``."""
        b = np.array([[float(lo), float(hi)] for lo, hi in box])
        mask = np.all((self.array >= b[:, 0] - 1e-12) & (self.array <= b[:, 1] + 1e-12), axis=1)
        return PointSet.from_points([self.points[i] for i in np.nonzero(mask)[0]], box, dim=self.dim)

    def translate(self, shift) -> "PointSet":
        s = S.to_vec(shift)
        return PointSet.from_points([S.add(p, s) for p in self.points],
                                    [(lo + c, hi + c) for (lo, hi), c in zip(self.box, s)], dim=self.dim)


# -- constructors ---------------------------------------------------------------

def lattice_window(basis, box, origin=None) -> PointSet:
    """All points ``origin + B·k`` (``k`` integer) inside the closed ``box``.

    ``basis`` lists the generator vectors (columns of ``B``).
    """
    gens = [S.to_vec(g) for g in basis]
    d = len(gens)
    box = tuple((S.to_scalar(lo), S.to_scalar(hi)) for lo, hi in box)
    o = S.to_vec(origin) if origin is not None else tuple(Fraction(0) for _ in range(d))
    B = np.array([[float(g[i]) for g in gens] for i in range(d)])
    Binv = np.linalg.inv(B)
    corners = np.array([[float(c) - float(oi) for c, oi in zip(corner, o)] for corner in itertools.product(*box)])
    kc = corners @ Binv.T
    lo = np.floor(kc.min(axis=0)).astype(int) - 1
    hi = np.ceil(kc.max(axis=0)).astype(int) + 1
    ks = np.array(list(itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi)))))
    pts_f = ks @ B.T + np.array([float(x) for x in o])
    bl = np.array([float(b[0]) for b in box]) - 1e-9
    bh = np.array([float(b[1]) for b in box]) + 1e-9
    ks = ks[np.all((pts_f >= bl) & (pts_f <= bh), axis=1)]
    pts = []
    for k in ks:
        p = tuple(oi + sum((int(kj) * g[i] for kj, g in zip(k, gens)), Fraction(0)) for i, oi in enumerate(o))
        if all(S.sgn(p[i] - box[i][0]) >= 0 and S.sgn(box[i][1] - p[i]) >= 0 for i in range(d)):
            pts.append(p)
    return PointSet.from_points(pts, box, dim=d)


def integer_window(dim: int, radius: int) -> PointSet:
    """``Z^dim ∩ [-radius, radius]^dim``."""
    r = int(radius)
    rng = range(-r, r + 1)
    pts = [tuple(Fraction(c) for c in p) for p in itertools.product(rng, repeat=dim)]
    return PointSet.from_points(pts, [(-r, r)] * dim)


def dual_basis(basis) -> list:
    """Generators of the dual lattice: ``(B^{-1})^T`` for ``B`` with the given columns."""
    from .geometry import _inv

    gens = [S.to_vec(g) for g in basis]
    d = len(gens)
    B = tuple(tuple(g[i] for g in gens) for i in range(d))
    inv = _inv(B)
    # columns of (B^{-1})^T are the rows of B^{-1}
    return [tuple(row) for row in inv]


# -- metrics ---------------------------------------------------------------------

def separation(L: PointSet) -> float:
    """Minimum pairwise distance; exact squared distance in rational mode."""
    if len(L) < 2:
        raise TooFew("separation needs at least two points")
    tree = cKDTree(L.array)
    dist, idx = tree.query(L.array, k=2)
    dmin = float(dist[:, 1].min())
    if not L.exact:
        return dmin
    cand = np.nonzero(dist[:, 1] <= dmin * (1 + 1e-9) + 1e-15)[0]
    best = None
    for i in cand:
        j = int(idx[i, 1])
        d2 = S.norm_sq(S.sub(L.points[i], L.points[j]))
        best = d2 if best is None or d2 < best else best
    return math.sqrt(best)


def covering_radius(L: PointSet, region=None, probe_step: Optional[float] = None) -> float:
    """Largest distance from a probe-grid point of ``region`` (default: the box) to ``L``.

    This underestimates the covering radius over the region by at most half
    a probe-cell diagonal.
    """
    if len(L) == 0:
        raise EmptySet("covering radius of an empty set")
    region = L.box if region is None else region
    b = np.array([[float(lo), float(hi)] for lo, hi in region])
    diam = float(np.linalg.norm(b[:, 1] - b[:, 0]))
    step = probe_step if probe_step is not None else diam / 500
    axes = [np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / step)) + 1)) for lo, hi in b]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    dist, _ = cKDTree(L.array).query(grid)
    return float(dist.max())


_BITMAP_KEYS = 1 << 26
_MAX_DENOMINATOR = 10 ** 6


def _integer_rows(L: PointSet) -> np.ndarray:
    """Integer rows proportional to the points: exact on a common denominator, else quantized."""
    if L.exact:
        den = math.lcm(*(Fraction(c).denominator for p in L.points for c in p))
        if den <= _MAX_DENOMINATOR:
            return np.array([[int(Fraction(c) * den) for c in p] for p in L.points], dtype=np.int64)
    return _quantize(L.array)


def _row_weights(span: np.ndarray) -> Optional[np.ndarray]:
    """Mixed-radix weights turning rows with ``|k_j| < span_j`` into distinct int64 keys.

    The map is linear, so key differences are keys of row differences.
    None when the keys would overflow.
    """
    radix = [2 * int(s) + 1 for s in span]
    if math.prod(radix) >= 2 ** 62:
        return None
    return np.cumprod([1] + radix[:-1]).astype(np.int64)


def _first_of_runs(k: np.ndarray) -> np.ndarray:
    """One index per distinct value of ``k`` (not necessarily the first)."""
    order = np.argsort(k, kind="quicksort")
    sk = k[order]
    start = np.ones(len(k), dtype=bool)
    start[1:] = sk[1:] != sk[:-1]
    return order[start]


def _pair_chunks(n: int, chunk: int):
    for start in range(0, n - 1, chunk):
        stop = min(n - 1, start + chunk)
        ii, jj = np.nonzero(np.arange(n)[None, :] > np.arange(start, stop)[:, None])
        yield ii + start, jj


def _unique_differences(L: PointSet, chunk: int = 512):
    """Unique nonzero differences ``p_j - p_i`` (j > i, float) with one witness pair each."""
    arr = L.array
    n = len(arr)
    if n < 2:
        return np.zeros((0, L.dim)), np.zeros((0, 2), dtype=int)
    q = _integer_rows(L)
    q -= q.min(axis=0)
    span = q.max(axis=0) + 1
    weights = _row_weights(span)
    if weights is not None and int(np.prod(2 * span + 1)) <= _BITMAP_KEYS:
        # small key range: remember one witness per key directly
        raw = q @ weights
        codes = raw + int(span @ weights)
        size = int(np.prod(2 * span + 1))
        wit_i = np.full(size, -1, dtype=np.int64)
        wit_j = np.empty(size, dtype=np.int64)
        for ii, jj in _pair_chunks(n, chunk):
            k = codes[jj] - raw[ii]
            wit_i[k] = ii
            wit_j[k] = jj
        keys = np.flatnonzero(wit_i >= 0)
        r = np.stack([wit_i[keys], wit_j[keys]], axis=1)
        return arr[r[:, 1]] - arr[r[:, 0]], r
    keys, reps = [], []
    codes = q @ weights if weights is not None else None
    for ii, jj in _pair_chunks(n, chunk):
        if codes is not None:
            k = codes[jj] - codes[ii]
        else:
            k = _quantize(arr[jj] - arr[ii])
            k = np.ascontiguousarray(k).view(np.dtype((np.void, k.dtype.itemsize * k.shape[1]))).ravel()
        first = _first_of_runs(k)
        keys.append(k[first])
        reps.append(np.stack([ii[first], jj[first]], axis=1))
    k = np.concatenate(keys)
    r = np.concatenate(reps)
    r = r[np.sort(_first_of_runs(k))]
    return arr[r[:, 1]] - arr[r[:, 0]], r


@dataclass(frozen=True)
class OrthogonalityReport:
    ok: bool
    worst_pair: Optional[tuple]
    worst_abs: float
    pairs_checked: int
    distinct_differences: int
    tolerance: float


def check_orthogonality(dom, L: PointSet, tol: float = 1e-9) -> OrthogonalityReport:
    """Check ``|ft(Ω, λ' − λ)| <= tol·|Ω|`` over all unordered pairs of ``L``."""
    dom = as_domain(dom)
    if L.dim != dom.dim:
        raise DimensionMismatch(f"point set of dim {L.dim} for domain of dim {dom.dim}")
    n = len(L)
    pairs = n * (n - 1) // 2
    if n < 2:
        return OrthogonalityReport(True, None, 0.0, pairs, 0, tol)
    diffs, reps = _unique_differences(L)
    vals = np.abs(ft(dom, diffs))
    w = int(np.argmax(vals))
    worst = float(vals[w])
    i, j = reps[w]
    ok = worst <= tol * float(dom.measure)
    return OrthogonalityReport(ok, (L.points[int(i)], L.points[int(j)]), worst, pairs, len(diffs), tol)


def difference_set(L: PointSet) -> PointSet:
    """All nonzero differences, deduplicated; box is the difference of boxes."""
    box = tuple((lo - hi, hi - lo) for lo, hi in L.box)
    if len(L) < 2:
        return PointSet.from_points([], box, dim=L.dim)
    _, reps = _unique_differences(L)
    out = []
    for i, j in reps:
        d = S.sub(L.points[int(j)], L.points[int(i)])
        out.append(d)
        out.append(S.neg(d))
    return PointSet.from_points(out, box, dim=L.dim)


def product_pointset(U: PointSet, V: PointSet) -> PointSet:
    box = tuple(U.box) + tuple(V.box)
    pts = [tuple(u) + tuple(v) for u in U.points for v in V.points]
    return PointSet.from_points(pts, box, dim=U.dim + V.dim)


# -- IO ------------------------------------------------------------------------------

def read_csv(source, box=None) -> PointSet:
    """Read a file path or file object; see :func:`parse_csv`."""
    if hasattr(source, "read"):
        return parse_csv(source.read(), box)
    with open(source) as fh:
        return parse_csv(fh.read(), box)


def parse_csv(text: str, box=None) -> PointSet:
    """One point per row; entries may be decimals or ``p/q`` rationals."""
    rows = []
    for row in csv.reader(io.StringIO(text)):
        row = [c.strip() for c in row if c.strip()]
        if not row or row[0].startswith("#"):
            continue
        rows.append([S.parse_scalar(c) for c in row])
    return PointSet.from_points(rows, box)


def write_csv(L: PointSet) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for p in L.points:
        w.writerow([S.format_scalar(c) for c in p])
    return buf.getvalue()


def to_json(L: PointSet) -> dict:
    return {
        "dim": L.dim,
        "points": [[S.format_scalar(c) for c in p] for p in L.points],
        "box": [[S.format_scalar(lo), S.format_scalar(hi)] for lo, hi in L.box],
    }


def from_json(data) -> PointSet:
    if not isinstance(data, dict):
        data = json.loads(data)
    pts = [[S.parse_scalar(c) for c in p] for p in data["points"]]
    box = [[S.parse_scalar(lo), S.parse_scalar(hi)] for lo, hi in data["box"]] if "box" in data else None
    return PointSet.from_points(pts, box, dim=int(data.get("dim", len(box) if box else 0)) or None)
