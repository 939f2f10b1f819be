"""Check orthogonality and tiling for lattice spectra of the square and the interval.

Run with ``python3 tutorials/02_tilings_and_spectra.py``.
"""

import math

import numpy as np

from spectra_kit import geometry as G
from spectra_kit.fourier import asymptotic_residual, unit_interval
from spectra_kit.packing import GridSpec, tiling_check
from spectra_kit.pointsets import PointSet, check_orthogonality, integer_window

L = integer_window(2, 20)
orth = check_orthogonality(G.unit_square(), L)
tile = tiling_check(G.unit_square(), L, GridSpec([(0, 1), (0, 1)], 32, 0))
print(f"square + Z^2: orthogonal={orth.ok} (worst {orth.worst_abs:.1e}), "
      f"tiles={tile.ok} (dev {tile.max_abs_dev_from_1:.1e}, tail {tile.tail_estimate:.1e})")

# untruncated interval sums lose about 2/(pi^2 K) to the tail
for K in (250, 500, 1000):
    Z = PointSet.from_points([(k,) for k in range(-K, K + 1)], [(-K, K)])
    rep = tiling_check(unit_interval(), Z, GridSpec([(0, 1)], 400, 0), truncation_radius=math.inf,
                       tail_correction="none")
    print(f"interval, K={K:4d}: dev {rep.max_abs_dev_from_1:.3e}  (2/(pi^2 K) = {2 / (math.pi ** 2 * K):.3e})")

# along the u axis the hexagon transform behaves like sin(pi u) times the interval transform
v = np.linspace(-2, 2, 801)
for u in (10, 20, 40, 80):
    print(f"u={u:3d}: max residual {np.max(asymptotic_residual(G.hexagon(), u, v)):.4e}")
