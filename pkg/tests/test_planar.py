"""One-dimensional front speed oracle and its profile interpolant."""

import numpy as np
import pytest

from conical_fronts.model import quadratic_ignition, zero_reaction
from conical_fronts.planar import SpeedBracketError, planar_front_speed_1d

# Speed of U'' - c U' + f(U) = 0 for f(u) = (u - 0.3)(1 - u), frozen from
# two independent solvers (phase-plane shooting and a BVP collocation run)
# that agreed to 1.3e-12.
C0_FROZEN = 0.4953702072733812


def test_front_speed_matches_frozen_value(planar):
    c0, _ = planar
    assert c0 == pytest.approx(C0_FROZEN, abs=1e-10)


def test_profile_is_normalized_and_monotone(planar):
    _, prof = planar
    assert prof.sample(0.0) == pytest.approx(prof.theta, abs=1e-12)
    assert np.all(prof.du_dy > 0.0)
    assert np.all(np.diff(prof.u) > 0.0)
    assert prof.u[0] < 1e-5 and prof.u[-1] > 1.0 - 1e-5


def test_profile_limits(planar):
    _, prof = planar
    assert prof.sample(-40.0) == pytest.approx(0.0, abs=1e-8)
    assert prof.sample(+40.0) == pytest.approx(1.0, abs=1e-8)


def test_sample_slope_consistency(planar):
    _, prof = planar
    ys = np.linspace(-6.0, 6.0, 241)
    h = 1e-5
    fd = (prof.sample(ys + h) - prof.sample(ys - h)) / (2.0 * h)
    assert np.allclose(prof.slope(ys), fd, atol=1e-6)


def test_left_tail_is_exponential_at_rate_c0(planar):
    # below the cutoff f = 0, so U solves U'' = c U': a pure exponential
    c0, prof = planar
    ys = np.linspace(-20.0, -12.0, 33)
    vals = prof.sample(ys)
    rate = np.diff(np.log(vals)) / np.diff(ys)
    assert np.allclose(rate, c0, atol=1e-10)


def test_right_tail_decays_at_declared_rate(planar):
    # outside the tabulated core the interpolant is the exact exponential
    _, prof = planar
    assert prof.decay_rate < 0.0
    ys = np.linspace(26.0, 34.0, 33)
    gap = 1.0 - prof.sample(ys)
    rate = np.diff(np.log(gap)) / np.diff(ys)
    assert np.allclose(rate, prof.decay_rate, atol=1e-10)


def test_speed_robust_to_phase_plane_step(model):
    # the bisection bracket, not the RK step, limits the accuracy here
    c_coarse, prof = planar_front_speed_1d(model, step=4e-4)
    assert abs(c_coarse - C0_FROZEN) < 1e-9
    assert prof.bracket <= 1e-10


def test_zero_reaction_has_no_bracket():
    with pytest.raises(SpeedBracketError):
        planar_front_speed_1d(zero_reaction(0.3), c_max=4.0)


def test_speed_scales_with_sqrt_of_reaction_rate():
    # f -> 4 f rescales time by 4 and length by 2, so c -> 2 c exactly
    c4, _ = planar_front_speed_1d(quadratic_ignition(0.3, scale=4.0),
                                  step=2e-4)
    assert c4 == pytest.approx(2.0 * C0_FROZEN, abs=5e-7)
