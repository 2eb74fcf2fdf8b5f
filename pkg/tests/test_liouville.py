import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octwalk.hyperbolic import GeodesicArc, geodesic_point
from octwalk.liouville import (
    PotentialParams,
    SingularRadius,
    conformal_factor,
    euclidean_time,
    euclidean_time_rate,
    liouville_residual,
    potential,
    pullback_to_disk,
    singular_radius,
)

GRID = np.round(np.arange(10, 91) * 0.01, 12)


def test_disk_potential_is_conformal_factor():
    params = PotentialParams()
    for r in GRID:
        assert potential(params, r) == pytest.approx(conformal_factor(r), rel=1e-12)
    assert potential(params, 0.5) == pytest.approx(64 / 9, rel=1e-14)


def test_residual_unit_potential():
    assert liouville_residual(PotentialParams(), GRID) <= 1e-6


def test_residual_general_potential_away_from_singularity():
    params = PotentialParams(2.0, 0.3)
    rs = [r for r in GRID if abs(r - singular_radius(params)) > 0.05]
    assert liouville_residual(params, rs) <= 1e-6


def test_residual_detects_wrong_function(monkeypatch):
    import octwalk.liouville as lv

    # a potential off by a constant factor no longer solves the equation
    original = lv._potential_ext
    monkeypatch.setattr(lv, "_potential_ext", lambda p, r: 1.01 * original(p, r))
    assert lv.liouville_residual(PotentialParams(), GRID) > 1e-3


def test_singular_radius():
    params = PotentialParams(2.0, 0.3)
    assert singular_radius(params) == pytest.approx(math.exp(-0.15))
    with pytest.raises(SingularRadius):
        potential(PotentialParams(1.0, 0.0), 1.0)
    with pytest.raises(ValueError):
        potential(params, 0.0)
    with pytest.raises(ValueError):
        PotentialParams(0.0, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(-1.0, 1.0))
def test_pullback_is_disk_metric(amp, offset):
    params = PotentialParams(amp, offset)
    rho = np.linspace(0.05, 0.95, 37)
    radial, angular = pullback_to_disk(params, rho)
    target = 4 / (1 - rho**2) ** 2
    np.testing.assert_allclose(radial, target, rtol=1e-9)
    np.testing.assert_allclose(angular, target, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(-3.0, 3.0))
def test_time_rate_matches_derivative(R, s):
    arc = GeodesicArc(R, 0.4)
    h = 1e-5
    numeric = (euclidean_time(arc, s + h) - euclidean_time(arc, s - h)) / (2 * h)
    assert numeric == pytest.approx(euclidean_time_rate(arc, s), rel=1e-6, abs=1e-10)
    # and the rate is the conformal weight at the actual point on the arc
    z = geodesic_point(arc, s).z
    assert euclidean_time_rate(arc, s) == pytest.approx((1 - abs(z) ** 2) ** 2 / 4, rel=1e-9)


def test_time_is_odd_and_bounded():
    arc = GeodesicArc(0.7, 0.0)
    assert euclidean_time(arc, 0.0) == 0.0
    assert euclidean_time(arc, 1.3) == pytest.approx(-euclidean_time(arc, -1.3), abs=1e-15)
    # Euclidean time stays finite while proper length diverges
    assert euclidean_time(arc, 30.0) == pytest.approx(euclidean_time(arc, 60.0), abs=1e-12)
    with pytest.raises(ValueError):
        euclidean_time(arc, math.nan)
