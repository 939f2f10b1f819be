import json
import math
from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from spectra_kit import geometry as G
from spectra_kit import product as Pr
from spectra_kit.hsets import h_enumerate, h_set
from spectra_kit.packing import GridSpec, open_rectangle, tiling_check
from spectra_kit.pointsets import check_orthogonality, integer_window
from spectra_kit.serialization import dumps, loads
from spectra_kit.windows import classify_spectral, is_window


def roundtrip(obj):
    text = dumps(obj)
    back = loads(text)
    assert back == obj
    assert dumps(back) == text
    return text


def test_rationals_are_strings():
    text = roundtrip(classify_spectral(G.octagon()))
    data = json.loads(text)
    assert data["ratio"] == "7/6" and data["shape"] == "OtherSymmetric"


def test_reports_round_trip():
    roundtrip(classify_spectral(G.hexagon()))
    roundtrip(is_window(G.hexagon(), open_rectangle(F(1, 2), F(3, 5))))
    roundtrip(check_orthogonality(G.unit_square(), integer_window(2, 2)))
    rep = tiling_check(G.unit_square(), integer_window(2, 6), GridSpec([(0, 1)] * 2, 4, 0))
    roundtrip(rep)
    roundtrip(h_enumerate(h_set(G.hexagon()), radius=2))


def test_infinite_radius_survives():
    rep = tiling_check(G.unit_square(), integer_window(2, 3), GridSpec([(0, 1)] * 2, 3, 0),
                       truncation_radius=math.inf, tail_correction="none")
    text = roundtrip(rep)
    assert '"inf"' in text


def test_product_reports_round_trip():
    job = Pr.square_interval_job(n_samples=2)
    roundtrip(Pr.extract_factor_spectrum(job)[0])
    roundtrip(Pr.theorem4_audit(job))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.fractions(-5, 5, max_denominator=50), st.fractions(-5, 5, max_denominator=50)),
                min_size=1, max_size=6))
def test_fraction_lists_round_trip(pts):
    data = {"points": [tuple(p) for p in pts], "scale": F(3, 7)}
    back = loads(dumps(data))
    assert back == {"points": tuple(tuple(p) for p in pts), "scale": F(3, 7)}
