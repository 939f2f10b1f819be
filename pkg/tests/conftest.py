"""Independent oracles shared by the test modules.

Nothing here calls into the library's own membership or transform code; the
oracles start from raw vertex lists.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest


def frac_vec(v):
    return tuple(Fraction(x) for x in v)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def is_int(x):
    return Fraction(x).denominator == 1


# -- 2D H-set from vertices --------------------------------------------------------

def polygon_clauses(vertices):
    """(tau, e) per edge of an origin-symmetric polygon given by ccw vertices."""
    V = [frac_vec(v) for v in vertices]
    n = len(V)
    out = []
    for i in range(n):
        a, b = V[i], V[(i + 1) % n]
        e = (b[0] - a[0], b[1] - a[1])
        # opposite edge is the negated one; tau moves its midpoint onto this midpoint
        tau = (a[0] + b[0], a[1] + b[1])
        out.append((tau, e))
    return out


def h_oracle(vertices, t):
    t = frac_vec(t)
    if t == (0, 0):
        return False
    for tau, e in polygon_clauses(vertices):
        if not (is_int(dot(t, tau)) or (is_int(dot(t, e)) and dot(t, e) != 0)):
            return False
    return True


def lattice_denominator(vectors):
    """lcm of denominators of every 2x2 inverse built from pairs of ``vectors``."""
    N = 1
    for a, b in combinations(vectors, 2):
        det = a[0] * b[1] - a[1] * b[0]
        if det == 0:
            continue
        for x in (b[1] / det, -a[1] / det, -b[0] / det, a[0] / det):
            N = N * x.denominator // math.gcd(N, x.denominator)
    return N


def h_bruteforce(vertices, radius):
    """All H points with |t| <= radius, by scanning the grid (1/N)Z^2 in integer arithmetic."""
    clauses = polygon_clauses(vertices)
    vecs = [v for c in clauses for v in c]
    N = lattice_denominator(vecs)
    M = 1
    for v in vecs:
        for x in v:
            M = M * x.denominator // math.gcd(M, x.denominator)
    K = int(math.ceil(radius * N))
    i, j = np.meshgrid(np.arange(-K, K + 1, dtype=np.int64), np.arange(-K, K + 1, dtype=np.int64), indexing="ij")
    i, j = i.ravel(), j.ravel()
    # t = (i, j)/N and <t, v> = (i·Mv0 + j·Mv1)/(N·M), an integer iff the numerator is divisible by N·M
    ok = (i * i + j * j) <= (radius * N) ** 2 + 1  # coarse; the exact radius test is below
    ok &= (i != 0) | (j != 0)
    for tau, e in clauses:
        st = i * int(tau[0] * M) + j * int(tau[1] * M)
        se = i * int(e[0] * M) + j * int(e[1] * M)
        ok &= (st % (N * M) == 0) | ((se % (N * M) == 0) & (se != 0))
    out = set()
    r2 = Fraction(radius) ** 2
    for a, b in zip(i[ok], j[ok]):
        t = (Fraction(int(a), N), Fraction(int(b), N))
        if t[0] ** 2 + t[1] ** 2 <= r2:
            out.add(t)
    return out


# -- 3D H-set from vertices and facets ----------------------------------------------

def h3_oracle(vertices, facets, t):
    V = [frac_vec(v) for v in vertices]
    t = frac_vec(t)
    if all(c == 0 for c in t):
        return False
    center = tuple(sum(v[k] for v in V) / len(V) for k in range(3))
    for F in facets:
        pts = [V[i] for i in F]
        cF = tuple(sum(p[k] for p in pts) / len(pts) for k in range(3))
        tau_F = tuple(2 * (cF[k] - center[k]) for k in range(3))
        m = len(F)
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % m]
            e = tuple(b[k] - a[k] for k in range(3))
            c, d = pts[(i + m // 2) % m], pts[(i + m // 2 + 1) % m]
            assert tuple(d[k] - c[k] for k in range(3)) == tuple(-x for x in e)
            tau_Fe = tuple((a[k] + b[k] - c[k] - d[k]) / 2 for k in range(3))
            s_F, s_Fe, s_e = dot(t, tau_F), dot(t, tau_Fe), dot(t, e)
            ok_Fe = is_int(s_Fe) and (m != 4 or s_Fe != 0)
            if not (is_int(s_F) or ok_Fe or (is_int(s_e) and s_e != 0)):
                return False
    return True


def h3_clause_vectors(vertices, facets):
    """Every (vector, must_be_nonzero) pair appearing in the 3D clauses."""
    V = [frac_vec(v) for v in vertices]
    center = tuple(sum(v[k] for v in V) / len(V) for k in range(3))
    out = set()
    for F in facets:
        pts = [V[i] for i in F]
        m = len(pts)
        cF = tuple(sum(p[k] for p in pts) / m for k in range(3))
        out.add((tuple(2 * (cF[k] - center[k]) for k in range(3)), False))
        for i in range(m):
            a, b = pts[i], pts[(i + 1) % m]
            c, d = pts[(i + m // 2) % m], pts[(i + m // 2 + 1) % m]
            out.add((tuple(b[k] - a[k] for k in range(3)), True))
            out.add((tuple((a[k] + b[k] - c[k] - d[k]) / 2 for k in range(3)), m == 4))
    return sorted(out)


# -- criterion lines shown at the end of a run ---------------------------------------

CRITERIA_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


# -- Fourier transform by quadrature --------------------------------------------------

_GL = np.polynomial.legendre.leggauss(48)


def _gl01():
    x, w = _GL
    return (x + 1) / 2, w / 2


def ft_triangle_quad(a, b, c, xi):
    """Duffy-mapped tensor Gauss-Legendre rule for a triangle."""
    a, b, c = (np.asarray(p, dtype=float) for p in (a, b, c))
    s, ws = _gl01()
    S_, T_ = np.meshgrid(s, s, indexing="ij")
    W = np.outer(ws, ws) * S_
    X = a + S_[..., None] * (b - a) + (S_ * T_)[..., None] * (c - b)
    jac = abs((b - a)[0] * (c - b)[1] - (b - a)[1] * (c - b)[0])
    phase = np.exp(-2j * np.pi * (X @ np.asarray(xi, dtype=float)))
    return complex(np.sum(W * phase) * jac)


def ft_polygon_quad(vertices, xi):
    V = [tuple(float(x) for x in v) for v in vertices]
    return sum(ft_triangle_quad(V[0], V[i], V[i + 1], xi) for i in range(1, len(V) - 1))


def ft_box_quad(box, xi):
    out = 1.0 + 0j
    x, w = _gl01()
    for (lo, hi), k in zip(box, xi):
        lo, hi = float(lo), float(hi)
        pts = lo + (hi - lo) * x
        out *= np.sum(w * np.exp(-2j * np.pi * k * pts)) * (hi - lo)
    return complex(out)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
