import math

import numpy as np
import pytest

import oracles
from conftest import LATTICES, NARROW, REGULAR, SKEWED, geometry, spectrum
from octwalk.multifractal import (
    QGrid,
    alpha_extremes,
    information_entropy,
    moment,
    saddle_alpha_limits,
    spectrum_report,
    tau,
    unit_slope_entropy,
)

# frozen from the first verified build
TAU2_SKEWED_N5 = -1.777963582501533


@pytest.mark.parametrize("name", sorted(LATTICES))
@pytest.mark.parametrize("n", range(1, 6))
def test_anchors(name, n):
    spec = spectrum(*LATTICES[name], n)
    assert tau(spec, 0.0) == pytest.approx(2.0, abs=1e-9)
    assert tau(spec, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_moment_against_direct_sum():
    spec = spectrum(*SKEWED, 2)
    lengths = oracles.word_lengths(geometry(*SKEWED), 2)
    assert len(lengths) == 56
    for q in (-3.0, -0.5, 0.0, 0.7, 2.0, 4.0):
        z_q = math.fsum(math.exp(q * x / 2) for x in lengths)
        z_1 = math.fsum(math.exp(x / 2) for x in lengths)
        assert moment(spec, q) == pytest.approx(math.log(z_q) - q * math.log(z_1), rel=1e-11, abs=1e-11)
        assert tau(spec, q) == pytest.approx(2 / math.log(56) * (math.log(z_q) - q * math.log(z_1)), rel=1e-11, abs=1e-11)


def test_tau_two_golden_and_nonlinear():
    t2 = tau(spectrum(*SKEWED, 5), 2.0)
    assert t2 == pytest.approx(TAU2_SKEWED_N5, abs=1e-9)
    # a monofractal would give tau(q) = 2 - 2q
    assert abs(t2 - (2 - 2 * 2)) >= 0.05


@pytest.fixture(scope="module")
def curve():
    return spectrum_report(spectrum(*SKEWED, 5), QGrid())


def test_report_grid_and_anchors(curve):
    qs = curve.column("q")
    assert len(qs) == 2001 and qs[0] == -10.0 and qs[-1] == 10.0
    assert curve.at(0.0).tau == pytest.approx(2.0, abs=1e-9)
    assert curve.at(0.0).d_q == pytest.approx(2.0, abs=1e-9)
    assert curve.at(1.0).d_q == curve.at(1.0).alpha
    assert curve.at(1.0).f == pytest.approx(curve.at(1.0).alpha, abs=1e-9)
    with pytest.raises(KeyError):
        curve.at(0.005)


def test_tau_convex_and_alpha_nonincreasing(curve):
    t = curve.column("tau")
    assert np.all(np.diff(t, 2) >= -1e-12)
    assert np.all(np.diff(curve.column("alpha")) <= 1e-12)


def test_legendre_consistency(curve):
    q, alpha, f, t = (curve.column(k) for k in ("q", "alpha", "f", "tau"))
    np.testing.assert_allclose(f, q * alpha + t, atol=1e-12)
    # df/dalpha = q on the interior, up to O(dq^2) of the differences
    inner = slice(200, -200)
    slope = np.gradient(f, alpha)[inner]
    np.testing.assert_allclose(slope, q[inner], atol=2e-2)


def test_entropy_two_ways(curve):
    s_diff = information_entropy(spectrum(*SKEWED, 5))
    s_slope = unit_slope_entropy(curve)
    assert abs(s_diff - s_slope) < 2e-3
    assert s_diff == pytest.approx(curve.at(1.0).alpha, abs=1e-12)


def test_entropy_ordering():
    s = {k: information_entropy(spectrum(*v, 5)) for k, v in [("narrow", NARROW), ("skewed", SKEWED), ("regular", REGULAR)]}
    assert s["narrow"] < s["skewed"] < s["regular"]


def test_alpha_extremes_tend_to_saddle_limits():
    spec = spectrum(*SKEWED, 5)
    lo_lim, hi_lim = saddle_alpha_limits(spec)
    lo, hi = alpha_extremes(spec)
    assert lo_lim < lo < hi < hi_lim
    # the finite-q proxy approaches the limit as |q| grows
    err = [abs(tau(spec, q) / (1 - q) - lo_lim) for q in (10.0, 40.0, 160.0)]
    assert err[0] > err[1] > err[2]
    err = [abs(tau(spec, q) / (1 - q) - hi_lim) for q in (-10.0, -40.0, -160.0)]
    assert err[0] > err[1] > err[2]
    # and the slope itself converges to the saddle value
    h = 1e-3
    slope = -(tau(spec, 200 + h) - tau(spec, 200 - h)) / (2 * h)
    assert slope == pytest.approx(lo_lim, abs=1e-6)


def test_alpha_extremes_needs_wide_grid():
    with pytest.raises(ValueError):
        alpha_extremes(spectrum(*SKEWED, 3), QGrid(-2.0, 2.0, 0.01))


@pytest.mark.parametrize("kwargs", [dict(dq=0.0), dict(q_min=0.5), dict(q_max=0.5), dict(dq=0.3), dict(q_min=-1.005)])
def test_qgrid_validation(kwargs):
    with pytest.raises(ValueError):
        QGrid(**kwargs)


def test_qgrid_values_exact():
    vals = QGrid(-1.0, 2.0, 0.25).values
    assert list(vals) == [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
    assert 1.0 in QGrid().values and 0.0 in QGrid().values
