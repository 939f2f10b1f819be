from fractions import Fraction as F

import pytest

from spectra_kit import geometry as G
from spectra_kit import windows as Wn
from spectra_kit.errors import InputError, NotAWindow, NotSymmetric
from spectra_kit.packing import OpenConvexPolygon, open_rectangle

HALF = F(1, 2)


def test_hexagon_canonical_window_exact():
    w = Wn.canonical_window(G.hexagon())
    assert w.region.boxes == (((-HALF, HALF), (F(-1, 3), F(1, 3))),)
    assert w.measure == F(2, 3) == 1 / G.measure(G.hexagon())
    assert w.adjacent == (0, 1)
    check = Wn.is_window(G.hexagon(), w)
    assert check.ok and check.method == "enumeration" and check.witness is None


def test_too_tall_rectangle_has_witness():
    check = Wn.is_window(G.hexagon(), open_rectangle(HALF, F(3, 5)))
    assert not check
    assert check.witness == (0, F(2, 3))


def test_square_windows_via_lines():
    sq = G.unit_square()
    assert Wn.is_window(sq, open_rectangle(HALF, HALF)).ok
    bad = Wn.is_window(sq, open_rectangle(HALF, F(51, 100)))
    assert not bad.ok and bad.method == "line-families"
    # the witness lies in Δ(W) and on a line of H
    t = bad.witness
    assert abs(t[0]) < 1 and abs(t[1]) < F(51, 50)
    assert any(c.denominator == 1 and c != 0 for c in t)


@pytest.mark.parametrize("A, ratio", [
    (G.unit_square(), 1),
    (G.hexagon(), 1),
    (G.hexagon(F(1, 3), F(2, 3)), 1),
    (G.octagon(), F(7, 6)),
])
def test_classification_ratios(A, ratio):
    res = Wn.classify_spectral(A)
    assert res.ratio == ratio == res.hull_ratio
    assert res.spectral == (ratio == 1)
    assert Wn.is_window(A, res.window).ok


def test_octagon_every_edge_gives_same_ratio():
    res = Wn.classify_spectral(G.octagon())
    assert set(res.edge_ratios) == {F(7, 6)}
    assert res.edge_index == 0


def test_nonsymmetric_polygon_is_a_verdict():
    res = Wn.classify_spectral(G.validate_polygon([(0, 0), (1, 0), (0, 1)]))
    assert res.shape is G.Shape.NON_SYMMETRIC and not res.spectral and res.window is None
    assert "symmetric" in res.justification
    with pytest.raises(NotSymmetric):
        Wn.canonical_window(G.validate_polygon([(0, 0), (1, 0), (0, 1)]))


def test_sheared_hexagon_back_map():
    A = G.apply_affine(G.AffineMap.from_lists([[1, 1], [0, 2]]), G.hexagon())
    w = Wn.canonical_window(A)
    assert w.original_measure * G.measure(A) == Wn.classify_spectral(A).ratio == 1
    assert Wn.is_window(A, w, coords="original").ok
    assert Wn.is_window(A, w, coords="canonical").ok
    assert isinstance(w.original_region(), OpenConvexPolygon)


def test_coords_flag_validation():
    with pytest.raises(InputError):
        Wn.is_window(G.hexagon(), open_rectangle(HALF, HALF), coords="sideways")


def test_bound_audit():
    a = Wn.window_bound_audit(G.hexagon(), open_rectangle(HALF, F(1, 4)))
    assert a.ratio == F(3, 4) and a.asserted and a.passed
    o = Wn.window_bound_audit(G.octagon(), Wn.canonical_window(G.octagon()))
    assert o.ratio == F(7, 6) and not o.asserted and o.passed is None
    with pytest.raises(NotAWindow):
        Wn.window_bound_audit(G.hexagon(), open_rectangle(HALF, F(3, 5)))


def test_every_edge_window_certifies_for_octagon():
    A = G.octagon()
    for i in range(A.n):
        assert Wn.is_window(A, Wn.canonical_window(A, i)).ok
