"""Exact/float scalar handling.

Coordinates are kept as :class:`fractions.Fraction` whenever the input is
(or snaps to) a small-denominator rational; otherwise they stay ``float`` and
every comparison goes through the tolerance context below.
"""

from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]
Vec = tuple  # tuple of Scalar

ABS_TOL = 1e-9
SNAP_TOL = 1e-12
MAX_DENOMINATOR = 10**6

_FLOAT_MODE = False


@contextlib.contextmanager
def float_mode(enabled: bool = True):
    """Within the block, :func:`to_scalar` returns floats for every input."""
    global _FLOAT_MODE
    prev, _FLOAT_MODE = _FLOAT_MODE, enabled
    try:
        yield
    finally:
        _FLOAT_MODE = prev


def to_scalar(x) -> Scalar:
    """Convert ``x`` to a Fraction when it is (nearly) a small rational.

    Strings such as ``"3/4"`` or ``"0.25"`` are parsed exactly.  Floats are
    snapped when within ``SNAP_TOL`` of a rational with denominator at most
    ``MAX_DENOMINATOR``.
    """
    if isinstance(x, (bool, np.bool_)):
        raise TypeError("booleans are not coordinates")
    if _FLOAT_MODE:
        xf = float(Fraction(x.strip())) if isinstance(x, str) else float(x)
        if not math.isfinite(xf):
            raise ValueError(f"non-finite coordinate {x!r}")
        return xf
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer, Rational)):
        return Fraction(int(x)) if not isinstance(x, Rational) else Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating, Real)):
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError(f"non-finite coordinate {x!r}")
        snapped = Fraction(xf).limit_denominator(MAX_DENOMINATOR)
        if abs(float(snapped) - xf) <= SNAP_TOL:
            return snapped
        return xf
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def to_vec(xs: Iterable) -> Vec:
    return tuple(to_scalar(x) for x in xs)


def is_exact(x) -> bool:
    if isinstance(x, (tuple, list)):
        return all(is_exact(v) for v in x)
    return isinstance(x, Fraction)


def exact_or_float(xs: Sequence) -> tuple:
    """Return ``xs`` unchanged if every entry is exact, else all as floats."""
    if all(isinstance(v, Fraction) for v in xs):
        return tuple(xs)
    return tuple(float(v) for v in xs)


def sgn(x: Scalar, tol: float = ABS_TOL) -> int:
    if isinstance(x, Fraction):
        return (x > 0) - (x < 0)
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def is_zero(x: Scalar, tol: float = ABS_TOL) -> bool:
    return sgn(x, tol) == 0


def eq(a: Scalar, b: Scalar, tol: float = ABS_TOL) -> bool:
    return is_zero(a - b, tol)


def is_integer(x: Scalar, tol: float = ABS_TOL) -> bool:
    """Exact integrality for Fractions; ``dist(x, Z) <= tol`` for floats."""
    if isinstance(x, Fraction):
        return x.denominator == 1
    return abs(x - round(x)) <= tol


def is_nonzero_integer(x: Scalar, tol: float = ABS_TOL) -> bool:
    return is_integer(x, tol) and not is_zero(x, tol)


def nearest_integer(x: Scalar) -> int:
    if isinstance(x, Fraction):
        return round(x)
    return int(round(x))


# -- small vector helpers ---------------------------------------------------

def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def neg(a: Sequence) -> Vec:
    return tuple(-x for x in a)


def cross2(a: Sequence, b: Sequence):
    return a[0] * b[1] - a[1] * b[0]


def cross3(a: Sequence, b: Sequence) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def norm_sq(a: Sequence):
    return dot(a, a)


def vec_eq(a: Sequence, b: Sequence, tol: float = ABS_TOL) -> bool:
    return len(a) == len(b) and all(eq(x, y, tol) for x, y in zip(a, b))


def lex_positive(v: Sequence, tol: float = ABS_TOL) -> bool:
    for x in v:
        s = sgn(x, tol)
        if s:
            return s > 0
    return False


def canonical_sign(v: Sequence, tol: float = ABS_TOL) -> Vec:
    """Representative of ``{v, -v}`` whose first nonzero coordinate is positive."""
    return tuple(v) if lex_positive(v, tol) else neg(v)


def centroid(points: Sequence[Sequence]) -> Vec:
    n = len(points)
    return tuple(sum(c, Fraction(0)) / n for c in zip(*points))


def as_float_array(points) -> np.ndarray:
    return np.array([[float(c) for c in p] for p in points], dtype=float)


def format_scalar(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def parse_scalar(text) -> Scalar:
    """Parse a JSON/CSV field: numbers go through :func:`to_scalar`, strings exactly."""
    return to_scalar(text)
