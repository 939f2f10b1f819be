import io
import math
from fractions import Fraction as F

import numpy as np
import pytest

from spectra_kit import geometry as G
from spectra_kit import pointsets as P
from spectra_kit import scalar as S
from spectra_kit.errors import InputError, TooFew


def test_from_points_dedups_and_infers_box():
    L = P.PointSet.from_points([(0, 0), (1, F(1, 2)), (0, 0)])
    assert len(L) == 2 and L.exact
    assert L.box == ((0, 1), (0, F(1, 2)))
    with pytest.raises(InputError):
        P.PointSet.from_points([(3, 0)], [(0, 1), (0, 1)])


def test_integer_and_lattice_windows():
    Z = P.integer_window(2, 3)
    assert len(Z) == 49
    D = P.lattice_window(P.dual_basis([(1, 0), (F(1, 2), F(3, 2))]), [(-2, 2), (-2, 2)])
    assert (0, 0) in set(D.points)
    # every point is an integer combination of the dual generators
    g1, g2 = P.dual_basis([(1, 0), (F(1, 2), F(3, 2))])
    for p in D.points:
        # pairing with the primal basis gives integers
        for b in ((1, 0), (F(1, 2), F(3, 2))):
            assert (p[0] * b[0] + p[1] * b[1]).denominator == 1


def test_dual_basis_pairs_to_identity():
    B = [(2, 1), (F(1, 3), 1)]
    D = P.dual_basis(B)
    for i, d in enumerate(D):
        for j, b in enumerate(B):
            assert d[0] * b[0] + d[1] * b[1] == (1 if i == j else 0)


def test_separation_and_covering():
    Z = P.integer_window(2, 4)
    assert P.separation(Z) == pytest.approx(1.0)
    r = P.covering_radius(Z, [(0, 1), (0, 1)], probe_step=0.01)
    assert r == pytest.approx(math.sqrt(2) / 2, abs=0.01)
    with pytest.raises(TooFew):
        P.separation(P.PointSet.from_points([(0, 0)]))


def test_orthogonality_of_square_spectrum():
    rep = P.check_orthogonality(G.unit_square(), P.integer_window(2, 5))
    assert rep.ok and rep.worst_abs < 1e-12
    assert rep.pairs_checked == 121 * 120 // 2
    assert rep.distinct_differences == (21 * 21 - 1) // 2


def test_orthogonality_fails_for_half_lattice():
    L = P.PointSet.from_points([(0, 0), (F(1, 2), 0)])
    rep = P.check_orthogonality(G.unit_square(), L)
    assert not rep.ok
    assert rep.worst_abs == pytest.approx(2 / math.pi)


def test_difference_set_symmetric():
    L = P.PointSet.from_points([(0,), (1,), (F(5, 2),)])
    D = P.difference_set(L)
    assert set(D.points) == {(1,), (-1,), (F(5, 2),), (F(-5, 2),), (F(3, 2),), (F(-3, 2),)}


def test_csv_round_trip_keeps_rationals():
    L = P.PointSet.from_points([(F(1, 3), -2), (F(5, 7), F(1, 2))])
    text = P.write_csv(L)
    assert "1/3" in text
    M = P.parse_csv("# comment\n" + text, L.box)
    assert M == L
    assert P.read_csv(io.StringIO(text), L.box) == L
    assert P.from_json(P.to_json(L)) == L


def test_product_pointset():
    U = P.integer_window(1, 2)
    V = P.PointSet.from_points([(F(1, 2),), (0,)], [(0, 1)])
    W = P.product_pointset(U, V)
    assert len(W) == 10 and W.dim == 2
    assert W.box == ((-2, 2), (0, 1))


def test_translate_and_restrict(rng):
    Z = P.integer_window(2, 3)
    T = Z.translate((F(1, 2), 0))
    assert T.box[0] == (F(-5, 2), F(7, 2))
    R = Z.restrict([(0, 1), (0, 1)])
    assert set(R.points) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_dedup_is_exact_for_rationals_and_tolerant_for_floats():
    tiny = F(1, 10**13)
    assert len(P.PointSet.from_points([(F(1, 10), 0), (F(1, 10) + tiny, 0)])) == 2
    # floats this close to 1/10 snap onto it
    assert len(P.PointSet.from_points([(0.1, 0.2), (0.1 + 1e-13, 0.2)])) == 1
    pts = [(0.1234567, 0.2), (0.1234567 + 1e-12, 0.2), (0.5, 0.5)]
    with S.float_mode():
        L = P.PointSet.from_points(pts)
    assert len(L) == 2 and not L.exact
    assert np.allclose(L.array[0], (0.1234567, 0.2))
