"""Closed-form Fourier transforms of indicator functions.

Convention: ``ft(Ω, ξ) = ∫_Ω exp(-2πi⟨ξ, x⟩) dx``.  All evaluators are
vectorized: ``ξ`` may be a single point or an array of shape ``(..., d)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy import optimize

from . import scalar as S
from .errors import DimensionMismatch, InputError, NotNormalized
from .geometry import ConvexPolygon, is_normalized, measure
from .scalar import Scalar

# |ξ|·diam below this switches polygon evaluation to the moment series
_SERIES_SWITCH = 1e-3
_SERIES_TERMS = 8


@dataclass(frozen=True)
class Interval:
    lo: Scalar
    hi: Scalar

    def __post_init__(self):
        object.__setattr__(self, "lo", S.to_scalar(self.lo))
        object.__setattr__(self, "hi", S.to_scalar(self.hi))
        if S.sgn(self.hi - self.lo) <= 0:
            raise InputError("interval needs lo < hi")

    dim = 1

    @property
    def measure(self) -> Scalar:
        return self.hi - self.lo

    @property
    def center(self) -> tuple:
        return ((self.lo + self.hi) / 2,)


@dataclass(frozen=True)
class BoxUnion:
    """Finite union of pairwise disjoint open axis-aligned boxes."""

    boxes: tuple  # each box: tuple of (lo, hi) per axis

    def __post_init__(self):
        boxes = tuple(tuple((S.to_scalar(lo), S.to_scalar(hi)) for lo, hi in b) for b in self.boxes)
        if not boxes:
            raise InputError("empty box union")
        d = len(boxes[0])
        for b in boxes:
            if len(b) != d:
                raise DimensionMismatch("boxes of different dimension")
            if any(S.sgn(hi - lo) <= 0 for lo, hi in b):
                raise InputError("box with empty side")
        for i in range(len(boxes)):
            for j in range(i + 1, len(boxes)):
                if all(S.sgn(min(a[1], b[1]) - max(a[0], b[0])) > 0 for a, b in zip(boxes[i], boxes[j])):
                    raise InputError(f"boxes {i} and {j} overlap")
        object.__setattr__(self, "boxes", boxes)

    @property
    def dim(self) -> int:
        return len(self.boxes[0])

    @property
    def measure(self) -> Scalar:
        return sum((math.prod((hi - lo for lo, hi in b), start=Fraction(1)) for b in self.boxes), Fraction(0))

    @property
    def center(self) -> Optional[tuple]:
        pts = [tuple((lo + hi) / 2 for lo, hi in b) for b in self.boxes]
        c = S.centroid(pts)
        # symmetric iff the reflected box list coincides with the original
        refl = {tuple((2 * ci - hi, 2 * ci - lo) for ci, (lo, hi) in zip(c, b)) for b in self.boxes}
        return c if refl == set(self.boxes) else None


@dataclass(frozen=True)
class PolygonDomain:
    polygon: ConvexPolygon

    dim = 2

    @property
    def measure(self) -> Scalar:
        return measure(self.polygon)

    @property
    def center(self) -> Optional[tuple]:
        return self.polygon.symmetry_center


@dataclass(frozen=True)
class Product:
    first: "Domain"
    second: "Domain"

    def __post_init__(self):
        object.__setattr__(self, "first", as_domain(self.first))
        object.__setattr__(self, "second", as_domain(self.second))

    @property
    def dim(self) -> int:
        return self.first.dim + self.second.dim

    @property
    def measure(self) -> Scalar:
        return self.first.measure * self.second.measure

    @property
    def center(self) -> Optional[tuple]:
        a, b = self.first.center, self.second.center
        return None if a is None or b is None else tuple(a) + tuple(b)


Domain = Union[Interval, BoxUnion, PolygonDomain, Product]


def as_domain(obj) -> Domain:
    if isinstance(obj, (Interval, BoxUnion, PolygonDomain, Product)):
        return obj
    if isinstance(obj, ConvexPolygon):
        return PolygonDomain(obj)
    raise TypeError(f"{type(obj).__name__} is not a supported domain")


def unit_interval() -> Interval:
    return Interval(Fraction(-1, 2), Fraction(1, 2))


# -- evaluation ----------------------------------------------------------------

def _points(xi, dim: int) -> np.ndarray:
    arr = np.asarray(xi, dtype=float)
    if dim == 1 and (arr.ndim == 0 or arr.shape[-1] != 1):
        arr = arr[..., None]
    if arr.shape[-1] != dim:
        raise DimensionMismatch(f"frequency of dim {arr.shape[-1]} for a domain of dim {dim}")
    return arr


def _interval_ft(lo: float, hi: float, x: np.ndarray) -> np.ndarray:
    length = hi - lo
    mid = 0.5 * (lo + hi)
    return length * np.sinc(length * x) * np.exp(-2j * np.pi * mid * x)


def _box_ft(box, xi: np.ndarray) -> np.ndarray:
    out = np.ones(xi.shape[:-1], dtype=complex)
    for k, (lo, hi) in enumerate(box):
        out = out * _interval_ft(float(lo), float(hi), xi[..., k])
    return out


def _polygon_series(verts: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Taylor series in ξ from exact simplex moments (fan triangulation)."""
    out = np.zeros(xi.shape[:-1], dtype=complex)
    v0 = verts[0]
    lin0 = xi @ v0
    for i in range(1, len(verts) - 1):
        v1, v2 = verts[i], verts[i + 1]
        area = 0.5 * ((v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0]))
        l0, l1, l2 = lin0, xi @ v1, xi @ v2
        # ∫_T ℓ^k = |T| · 2 k!/(k+2)! · h_k(ℓ(v0), ℓ(v1), ℓ(v2))
        for k in range(_SERIES_TERMS):
            hk = np.zeros_like(l0)
            for a in range(k + 1):
                for b in range(k + 1 - a):
                    hk = hk + l0**a * l1**b * l2 ** (k - a - b)
            moment = area * 2.0 / ((k + 1) * (k + 2)) * hk
            out = out + (-2j * np.pi) ** k / math.factorial(k) * moment
    return out


def _polygon_ft(P: ConvexPolygon, xi: np.ndarray) -> np.ndarray:
    verts = np.array([[float(c) for c in v] for v in P.vertices])
    nxt = np.roll(verts, -1, axis=0)
    d = nxt - verts
    mid = 0.5 * (verts + nxt)
    nu = np.stack([d[:, 1], -d[:, 0]], axis=1)  # outward normal × edge length

    flat = xi.reshape(-1, 2)
    r2 = np.einsum("ij,ij->i", flat, flat)
    diam = float(np.max(np.linalg.norm(verts - verts.mean(axis=0), axis=1))) * 2
    small = np.sqrt(r2) * max(diam, 1e-300) < _SERIES_SWITCH

    out = np.empty(flat.shape[0], dtype=complex)
    big = ~small
    if np.any(big):
        x = flat[big]
        # divergence theorem: boundary sum of ⟨ξ,ν_e⟩ e^{-2πi⟨ξ,m_e⟩} sinc(⟨ξ,d_e⟩)
        terms = (x @ nu.T) * np.exp(-2j * np.pi * (x @ mid.T)) * np.sinc(x @ d.T)
        out[big] = 1j * terms.sum(axis=1) / (2 * np.pi * r2[big])
    if np.any(small):
        out[small] = _polygon_series(verts, flat[small])
    return out.reshape(xi.shape[:-1])


def _ft_array(dom: Domain, xi: np.ndarray) -> np.ndarray:
    if isinstance(dom, Interval):
        return _interval_ft(float(dom.lo), float(dom.hi), xi[..., 0])
    if isinstance(dom, BoxUnion):
        out = np.zeros(xi.shape[:-1], dtype=complex)
        for b in dom.boxes:
            out = out + _box_ft(b, xi)
        return out
    if isinstance(dom, PolygonDomain):
        return _polygon_ft(dom.polygon, xi)
    if isinstance(dom, Product):
        k = dom.first.dim
        return _ft_array(dom.first, xi[..., :k]) * _ft_array(dom.second, xi[..., k:])
    raise TypeError(type(dom).__name__)


def ft(dom, xi):
    """Fourier transform of the indicator of ``dom`` at ``xi``.

    Returns a Python complex for a single point, else a complex array of
    shape ``xi.shape[:-1]``.
    """
    dom = as_domain(dom)
    arr = _points(xi, dom.dim)
    out = _ft_array(dom, arr)
    if out.ndim == 0:
        return complex(out)
    return out


def power(dom, x):
    """Normalized power ``|ft|^2 / |Ω|^2``: equals 1 at 0 and integrates to ``1/|Ω|``."""
    dom = as_domain(dom)
    m = float(dom.measure)
    val = np.abs(ft(dom, x)) ** 2 / (m * m)
    return float(val) if np.ndim(val) == 0 else val


def is_zero(dom, xi, tol: float = 1e-9):
    """True where ``|ft(Ω, ξ)| <= tol·|Ω|``."""
    if tol <= 0:
        raise InputError("tolerance must be positive")
    dom = as_domain(dom)
    val = np.abs(ft(dom, xi)) <= tol * float(dom.measure)
    return bool(val) if np.ndim(val) == 0 else val


# -- minimal zero radius ------------------------------------------------------

def _directions(dim: int, n_angles: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        th = np.linspace(0.0, 2 * np.pi, n_angles, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    # coordinate axes plus a fixed-seed random spread on the sphere
    g = np.random.default_rng(0).standard_normal((n_angles, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return np.concatenate([np.eye(dim), -np.eye(dim), g])


def _real_profile(dom: Domain):
    """Function whose real zeros are the zeros of ft, if the domain has a center."""
    c = dom.center
    m = float(dom.measure)
    if c is None:
        return None
    cf = np.array([float(x) for x in c])

    def g(pts):
        val = _ft_array(dom, pts) * np.exp(2j * np.pi * (pts @ cf))
        return val.real / m

    return g


def _first_zero_on_ray(dom: Domain, g, u: np.ndarray, radius: float, step: float, rtol: float) -> float:
    rs = np.arange(step, radius + step, step)
    pts = rs[:, None] * u[None, :]
    m = float(dom.measure)
    if g is not None:
        vals = g(pts)
        sgn = np.sign(vals)
        hits = np.nonzero(sgn[:-1] * sgn[1:] <= 0)[0]
        exact0 = np.nonzero(vals == 0)[0]
        cand = []
        if hits.size:
            i = int(hits[0])
            a, b = rs[i], rs[i + 1]
            fa = g((a * u)[None, :])[0]
            if fa == 0:
                cand.append(a)
            else:
                cand.append(optimize.brentq(lambda r: g((r * u)[None, :])[0], a, b, rtol=rtol, xtol=1e-14))
        if exact0.size:
            cand.append(rs[int(exact0[0])])
        # tangential zeros do not change sign: look at small local minima of |g|
        absv = np.abs(vals)
        loc = np.nonzero((absv[1:-1] <= absv[:-2]) & (absv[1:-1] <= absv[2:]) & (absv[1:-1] < 1e-3))[0] + 1
        for i in loc[:3]:
            res = optimize.minimize_scalar(
                lambda r: abs(g((r * u)[None, :])[0]), bounds=(rs[i - 1], rs[i + 1]), method="bounded",
                options={"xatol": 1e-12},
            )
            if res.fun <= 1e-9:
                cand.append(res.x)
                break
        return min(cand) if cand else math.inf
    absv = np.abs(_ft_array(dom, pts)) / m
    loc = np.nonzero((absv[1:-1] <= absv[:-2]) & (absv[1:-1] <= absv[2:]) & (absv[1:-1] < 1e-2))[0] + 1
    for i in loc:
        res = optimize.minimize_scalar(
            lambda r: abs(_ft_array(dom, (r * u)[None, :])[0]) / m, bounds=(rs[i - 1], rs[i + 1]),
            method="bounded", options={"xatol": 1e-12},
        )
        if res.fun <= 1e-9:
            return float(res.x)
    return math.inf


def chi(dom, search_radius: float = 4.0, grid_step: float = 0.01, n_angles: int = 360) -> float:
    """Estimate of the smallest norm of a zero of ``ft(Ω, ·)``.

    Numerical evidence only: a ray scan with bisection refinement (relative
    accuracy 1e-8), then a local minimization over the ray direction in 2D.
    Returns ``math.inf`` when no zero is found inside ``search_radius``.
    """
    if search_radius <= 0 or grid_step <= 0:
        raise InputError("search radius and grid step must be positive")
    dom = as_domain(dom)
    g = _real_profile(dom)
    dirs = _directions(dom.dim, n_angles)
    radii = np.array([_first_zero_on_ray(dom, g, u, search_radius, grid_step, 1e-10) for u in dirs])
    best = int(np.argmin(radii))
    r = float(radii[best])
    if not math.isfinite(r):
        return math.inf
    if dom.dim == 2:
        th0 = math.atan2(dirs[best][1], dirs[best][0])
        dth = 2 * math.pi / n_angles

        def r_of(th):
            u = np.array([math.cos(th), math.sin(th)])
            return _first_zero_on_ray(dom, g, u, min(search_radius, 2 * r), grid_step, 1e-10)

        res = optimize.minimize_scalar(r_of, bounds=(th0 - dth, th0 + dth), method="bounded",
                                       options={"xatol": 1e-10})
        if res.fun < r:
            r = float(res.fun)
    return r


# -- asymptotics ---------------------------------------------------------------

def asymptotic_residual(A: ConvexPolygon, u, v):
    """``|πu·ft(A,(u,v)) − sin(πu)·ft(I,v)|`` for a normalized polygon ``A``.

    ``I = [-1/2, 1/2]``; the residual is ``O(1/|u|)`` for bounded ``v``.
    """
    if not is_normalized(A):
        raise NotNormalized("polygon must be origin-symmetric with edge (1/2,-1/2)-(1/2,1/2)")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    pts = np.stack([u, v], axis=-1)
    lhs = np.pi * u * _polygon_ft(A, pts)
    rhs = np.sin(np.pi * u) * _interval_ft(-0.5, 0.5, v)
    out = np.abs(lhs - rhs)
    return float(out) if out.ndim == 0 else out
