"""Pulsating-front solves on the periodic strip and their helpers."""

import math

import numpy as np
import pytest

from conical_fronts.model import cosine_flow, diffusion_matrix
from conical_fronts.strip import (FrontProfile, PeriodicStripGrid,
                                  StripSolveOptions, check_speed_symmetry,
                                  drift_at_speed, normalize_front,
                                  reflect_profile, resample_profile,
                                  solve_pulsating_front, strip_residual)

THETA = 0.3
ALPHA = math.pi / 3.0


def test_speed_is_near_the_planar_one(strip_pair, planar):
    # weak shear (amplitude 0.5, unit period) shifts the speed only
    # slightly; on this short strip the truncation bias (front tails cut at
    # |Y| = 7.5) dominates the shear enhancement, so only closeness is
    # asserted, not the sign of the shift
    c0, _ = planar
    c_a = strip_pair["est_a"].c
    assert abs(c_a - c0) < 0.01


def test_solver_reports_converged_diagnostics(strip_pair):
    est = strip_pair["est_a"]
    assert est.bracket <= 1e-4
    assert est.residual <= 1e-5
    assert est.iterations > 0


def test_variants_share_one_speed(strip_pair):
    c_a = strip_pair["est_a"].c
    c_b = strip_pair["est_b"].c
    assert abs(c_a - c_b) <= 0.005 * c_a
    assert check_speed_symmetry(strip_pair["est_a"], strip_pair["est_b"],
                                0.005 * c_a)


def test_front_shape(strip_pair):
    front = strip_pair["front_a"]
    vals = front.values
    assert vals.shape == (front.grid.nx, front.grid.ny + 1)
    assert vals.min() >= -1e-12 and vals.max() <= 1.0 + 1e-12
    assert np.all(vals[:, 0] < 1e-6)          # extinguished end
    assert np.all(vals[:, -1] > 1.0 - 1e-6)   # burnt end
    # monotone in Y up to solver tolerance
    assert np.diff(vals, axis=1).min() > -1e-8


def test_front_varies_with_x(strip_pair):
    # the shear prints a periodic modulation on the front; it is weak (the
    # front is several periods wide, so the flow largely homogenizes) but
    # must be clearly above solver noise
    vals = strip_pair["front_a"].values
    mid = vals.shape[1] // 2
    assert vals[:, mid].max() - vals[:, mid].min() > 1e-3


def test_steady_residual_is_small(strip_pair, cosine, model):
    front = strip_pair["front_a"]
    est = strip_pair["est_a"]
    res = strip_residual(front, est.c, diffusion_matrix(ALPHA, "A"), cosine,
                         ALPHA, model)
    assert res.shape == (front.grid.nx, front.grid.ny - 1)
    h2 = max(front.grid.dx, front.grid.dy) ** 2
    assert float(np.max(np.abs(res))) <= 10.0 * h2


def test_drift_vanishes_at_the_solved_speed(strip_pair, cosine, model):
    front = strip_pair["front_a"]
    est = strip_pair["est_a"]
    opts = StripSolveOptions(c_guess=est.c, initial_values=front.values)
    drift, _ = drift_at_speed(diffusion_matrix(ALPHA, "A"), cosine, ALPHA,
                              model, front.grid, est.c, opts)
    assert abs(drift) <= 5e-4


def test_drift_sign_brackets_the_speed(strip_pair, cosine, model):
    front = strip_pair["front_a"]
    est = strip_pair["est_a"]
    opts = StripSolveOptions(c_guess=est.c, initial_values=front.values)
    lo, _ = drift_at_speed(diffusion_matrix(ALPHA, "A"), cosine, ALPHA,
                           model, front.grid, est.c - 0.02, opts)
    hi, _ = drift_at_speed(diffusion_matrix(ALPHA, "A"), cosine, ALPHA,
                           model, front.grid, est.c + 0.02, opts)
    # drift measures (true - trial): positive for slow trials
    assert lo > 0.0 > hi


def test_reflection_is_an_involution(strip_pair):
    front = strip_pair["front_a"]
    twice = reflect_profile(reflect_profile(front))
    assert np.array_equal(twice.values, front.values)
    assert twice.variant == front.variant


def test_reflection_maps_variants(strip_pair):
    refl = reflect_profile(strip_pair["front_a"])
    assert refl.variant == "B"
    # evenness of the cosine flow: reflected A is close to the solved B
    gap = np.max(np.abs(refl.values - strip_pair["front_b"].values))
    assert gap < 0.02


def test_normalize_front_pins_the_cutoff(strip_pair):
    # the crossing ordinate is located by linear interpolation while the
    # shift is applied with a cubic spline, so the pinned node sits within
    # an interpolation-mismatch of the cutoff, not exactly on it
    front = normalize_front(strip_pair["front_a"], THETA)
    assert front.normalized
    j0 = np.searchsorted(front.grid.y_nodes(), 0.0)
    assert front.values[0, j0] == pytest.approx(THETA, abs=2e-3)


def test_resample_preserves_the_front(strip_pair):
    front = strip_pair["front_a"]
    fine = PeriodicStripGrid(period_length=1.0, nx=2 * front.grid.nx,
                             y_max=front.grid.y_max, ny=2 * front.grid.ny)
    vals = resample_profile(front, fine)
    assert vals.shape == (fine.nx, fine.ny + 1)
    # source nodes are a subset of the fine nodes: values must match there
    assert np.allclose(vals[::2, ::2], front.values, atol=1e-9)
    assert vals.min() >= 0.0 and vals.max() <= 1.0


def test_resample_fills_beyond_source_strip(strip_pair):
    front = strip_pair["front_a"]
    tall = PeriodicStripGrid(period_length=1.0, nx=front.grid.nx,
                             y_max=2.0 * front.grid.y_max,
                             ny=2 * front.grid.ny)
    vals = resample_profile(front, tall)
    assert np.all(vals[:, 0] == 0.0)
    assert np.all(vals[:, -1] == 1.0)


def test_front_value_at_wraps_periodically(strip_pair):
    front = strip_pair["front_a"]
    xs = np.array([0.1, 0.4, 0.9])
    ys = np.array([-1.0, 0.0, 2.0])
    assert np.allclose(front.value_at(xs, ys), front.value_at(xs + 3.0, ys),
                       atol=1e-12)


def test_solver_guards(model, cosine, strip_grid_small):
    small = PeriodicStripGrid(period_length=1.0, nx=32, y_max=6.0, ny=64)
    with pytest.raises(ValueError, match="nx >= 64"):
        solve_pulsating_front(diffusion_matrix(ALPHA, "A"), cosine, ALPHA,
                              model, small)
    with pytest.raises(ValueError, match="alpha"):
        solve_pulsating_front(diffusion_matrix(ALPHA / 2, "A"), cosine,
                              ALPHA, model, strip_grid_small)
    bad_flow = cosine_flow(0.5, 2.0)
    with pytest.raises(ValueError, match="period"):
        solve_pulsating_front(diffusion_matrix(ALPHA, "A"), bad_flow, ALPHA,
                              model, strip_grid_small)
