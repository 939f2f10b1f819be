"""Classify a few symmetric polygons and inspect their windows.

Run with ``python3 tutorials/01_polygons_and_windows.py``.
"""

from fractions import Fraction as F

from spectra_kit import geometry as G
from spectra_kit import hsets as H
from spectra_kit.packing import open_rectangle
from spectra_kit.windows import canonical_window, classify_spectral, is_window

shapes = {
    "square": G.unit_square(),
    "hexagon": G.hexagon(),
    "sheared hexagon": G.hexagon(F(1, 3), F(2, 3)),
    "octagon": G.octagon(),
}

for name, A in shapes.items():
    res = classify_spectral(A)
    print(f"{name:16s} shape={res.shape.value:18s} |W|*|A|={str(res.ratio):5s} spectral={res.spectral}")

# the hexagon's canonical window is (-1/2,1/2) x (-1/3,1/3)
A = G.hexagon()
w = canonical_window(A)
print("\nhexagon window:", w.region.boxes, "measure", w.measure, "=", 1 / G.measure(A))

# the smallest nonzero points of H(A) are (0, ±2/3); a taller box catches one
Hs = H.h_set(A)
print("H(A) within radius 1:", H.h_enumerate(Hs, radius=1).points)
print("box (1/2, 3/5) is a window:", is_window(A, open_rectangle(F(1, 2), F(3, 5))))

# for a parallelogram H(A) is a union of lines and matches the zero set
sq = H.h_set(G.unit_square())
print("\nsquare H-set kind:", sq.kind.value, [fam.normal for fam in sq.closed_form])
