"""Spectral sets, lattice tilings, H-sets, windows and cut-and-project spectra."""

from .errors import InputError, SpectraKitError
from .fourier import BoxUnion, Interval, PolygonDomain, Product, chi, ft, is_zero, power
from .geometry import (
    AffineMap,
    ConvexPolygon,
    ConvexPolytope3,
    Shape,
    classify_shape,
    hexagon,
    load_polytope,
    measure,
    normalize,
    octagon,
    polygon,
    truncated_octahedron,
    unit_cube,
    unit_square,
)
from .hsets import HKind, HSet, h3_set, h_enumerate, h_membership, h_set
from .packing import GridSpec, TilingReport, packing_check, tiling_check
from .pointsets import PointSet, check_orthogonality, dual_basis, integer_window, lattice_window
from .product import ProductSpectrumJob, cut_project, extract_factor_spectrum, theorem4_audit, w_compatible
from .scalar import float_mode
from .serialization import dumps, loads
from .windows import Window, canonical_window, classify_spectral, is_window, window_bound_audit

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
