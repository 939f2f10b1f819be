from fractions import Fraction as F

import numpy as np
import pytest

from spectra_kit import geometry as G
from spectra_kit import product as Pr
from spectra_kit.errors import DimensionMismatch
from spectra_kit.fourier import ft, unit_interval
from spectra_kit.packing import delta_membership, open_rectangle, region_contains
from spectra_kit.pointsets import PointSet, integer_window, lattice_window, product_pointset
from spectra_kit.windows import canonical_window

HALF = F(1, 2)


def small_hexagon_lambda(radius=2, K=2):
    D = lattice_window(Pr.hexagon_dual_basis(), [(-radius, radius + 1)] * 2)
    return product_pointset(D, PointSet.from_points([(k,) for k in range(-K, K + 1)], [(-K, K)]))


def bruteforce_compatible(L, W, B):
    bad = 0
    for p in L.points:
        for q in L.points:
            if p == q:
                continue
            d = tuple(a - b for a, b in zip(q, p))
            if delta_membership(W, d[:2]) and abs(ft(B, [float(c) for c in d[2:]])) > 1e-9:
                bad += 1
    return bad == 0


@pytest.mark.parametrize("W, expect", [
    (open_rectangle(HALF, F(1, 3)), True),
    (open_rectangle(HALF, F(2, 5)), False),
    (open_rectangle(F(3, 5), F(1, 4)), False),  # (1, 1/3) is a dual lattice difference
    (open_rectangle(F(2, 5), F(1, 4)), True),
])
def test_w_compatible_matches_bruteforce(W, expect):
    L = small_hexagon_lambda()
    rep = Pr.w_compatible(L, W, unit_interval())
    assert rep.ok == expect == bruteforce_compatible(L, W, unit_interval())


def test_cut_project_matches_direct_selection():
    L = small_hexagon_lambda()
    W = open_rectangle(HALF, F(1, 3))
    x = (F(1, 5), F(1, 7))
    cut = Pr.cut_project(L, W, x)
    want = {p[2:] for p in L.points if region_contains(W, (p[0] - x[0], p[1] - x[1]))}
    assert set(cut.gamma.points) == want
    assert cut.injective and cut.selected == len(want)


def test_cut_project_reports_collisions_and_window_shortfall():
    L = PointSet.from_points([(0, 0, 0), (F(1, 10), 0, 0), (0, 0, 1)], [(-5, 5), (-5, 5), (-5, 5)])
    cut = Pr.cut_project(L, open_rectangle(HALF, HALF), (0, 0))
    assert not cut.injective and cut.diagnostic == "NonInjective"
    far = Pr.cut_project(L, open_rectangle(HALF, HALF), (5, 0))
    assert far.diagnostic == "InsufficientWindow"


def test_step2_sums_agree():
    job = Pr.hexagon_interval_job(radius=3, K=4)
    ys = np.linspace(-0.5, 0.5, 9)
    full, via = Pr.step2_sums(job.L, job.W, job.B, (F(1, 3), F(1, 4)), ys)
    assert np.allclose(full, via, atol=1e-12)


def test_square_job_audit_passes():
    rep = Pr.theorem4_audit(Pr.square_interval_job(n_samples=5))
    assert rep.passed
    assert rep.step(4).passed and rep.step(4).detail["equal"] and rep.step(4).detail["exact"]
    assert rep.w_measure == rep.a_measure_inverse == 1


def test_enlarged_window_is_caught():
    A = G.hexagon()
    W = open_rectangle(HALF, F(2, 5))
    job = Pr.hexagon_interval_job(radius=4, K=6, W=W, n_samples=4)
    rep = Pr.theorem4_audit(job)
    assert not rep.passed
    assert rep.step(1).passed is False and rep.step(2).passed is False and rep.step(4).passed is False
    assert rep.step(2).detail["report"].max_sum > 1.5
    assert job.w_measure() * G.measure(A) == F(4, 5) * 3 / 2


def test_random_shift_spectrum_extracts():
    job = Pr.hexagon_interval_job(radius=6, K=8, shifts="random", n_samples=6, seed=3)
    samples = Pr.extract_factor_spectrum(job)
    assert all(s.ok for s in samples)
    # slices are shifted copies of Z
    for s in samples:
        frac = {p[0] - int(p[0] // 1) for p in s.cut.gamma.points}
        assert len(frac) == 1


def test_samples_are_seeded():
    job = Pr.square_interval_job(n_samples=4, seed=11)
    assert job.samples() == Pr.square_interval_job(n_samples=4, seed=11).samples()
    assert job.samples() != Pr.square_interval_job(n_samples=4, seed=12).samples()


def test_thread_env_keeps_order(monkeypatch):
    job = Pr.square_interval_job(n_samples=6)
    serial = Pr.extract_factor_spectrum(job)
    monkeypatch.setenv(Pr.THREADS_ENV, "3")
    threaded = Pr.extract_factor_spectrum(job)
    assert [s.x for s in serial] == [s.x for s in threaded]
    assert [s.ok for s in serial] == [s.ok for s in threaded]


def test_job_rejects_wrong_dimension():
    with pytest.raises(DimensionMismatch):
        Pr.ProductSpectrumJob(G.hexagon(), unit_interval(), integer_window(2, 2), canonical_window(G.hexagon()))
