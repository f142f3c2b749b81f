"""Barrier construction: components, gluing, regions, and certificates."""

import math

import numpy as np
import pytest

from conical_fronts.barriers import (PlaneGrid, build_components,
                                     build_subsolution, build_supersolution,
                                     calibrate_residual_floor,
                                     certify_subsolution_margin,
                                     certify_supersolution_cases,
                                     choose_beta, classify_region,
                                     classify_region_grid, extend_H,
                                     integrate_h, measure_band_constants,
                                     residual, rotated_coordinates)
from conical_fronts.model import zero_flow

THETA = 0.3
ALPHA = math.pi / 3.0


# ------------------------------------------------------------- rotation

def test_rotated_coordinates_formulas():
    grid = PlaneGrid(x_max=2.0, y_max=2.0, nx=16, ny=16)
    Y1, Y2 = rotated_coordinates(grid, ALPHA)
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    ca, sa = math.cos(ALPHA), math.sin(ALPHA)
    assert np.allclose(Y1, x * ca + y * sa, atol=1e-14)
    assert np.allclose(Y2, -x * ca + y * sa, atol=1e-14)


def test_rotated_coordinates_degenerate_at_right_angle():
    grid = PlaneGrid(x_max=2.0, y_max=2.0, nx=16, ny=16)
    Y1, Y2 = rotated_coordinates(grid, math.pi / 2)
    assert np.allclose(Y1, Y2, atol=1e-14)


# ------------------------------------------------------------ components

def test_components_sample_the_rotated_fronts(kit):
    # phi1(x, y) = phi(x mod L, x cos a + y sin a), clipped to [0, 1]
    comp = kit["components"]
    phi, psi = kit["phi"], kit["psi"]
    grid = comp.grid
    Y1, Y2 = rotated_coordinates(grid, ALPHA)
    for i, j in [(3, 7), (40, 60), (90, 100), (48, 56)]:
        x = grid.x_nodes()[i]
        d1 = float(np.clip(phi.value_at(x, Y1[i, j]), 0.0, 1.0))
        d2 = float(np.clip(psi.value_at(x, Y2[i, j]), 0.0, 1.0))
        assert comp.phi1[i, j] == pytest.approx(d1, abs=1e-12)
        assert comp.phi2[i, j] == pytest.approx(d2, abs=1e-12)


def test_components_respect_front_range(kit):
    comp = kit["components"]
    for field in (comp.phi1, comp.phi2):
        assert field.min() >= -1e-9
        assert field.max() <= 1.0 + 1e-9


def test_components_require_normalized_fronts(strip_pair, plane_small):
    with pytest.raises(ValueError, match="normalized"):
        build_components(strip_pair["front_a"], strip_pair["front_b"],
                         ALPHA, plane_small)


def test_components_reject_short_strip(kit):
    # a plane too large for the strip must be refused, not extrapolated
    big = PlaneGrid(x_max=20.0, y_max=20.0, nx=32, ny=32)
    with pytest.raises(ValueError):
        build_components(kit["phi"], kit["psi"], ALPHA, big)


# ----------------------------------------------------------- sub / super

def test_subsolution_is_the_exact_max(kit):
    comp = kit["components"]
    assert np.array_equal(kit["sub"],
                          np.maximum(comp.phi1, comp.phi2))


def test_supersolution_identity_mode(kit):
    comp = kit["components"]
    raw = build_supersolution(None, comp.phi1, comp.phi2)
    assert np.array_equal(raw, comp.phi1 + comp.phi2)


def test_supersolution_rejects_broken_components(kit):
    comp = kit["components"]
    with pytest.raises(ValueError, match="leaves"):
        build_supersolution(kit["h_profile"], comp.phi1 + 1.5, comp.phi2)


def test_defective_budget_breaks_ordering(kit):
    # the slope-budget beta sits far below the ascent threshold, so the
    # glued upper field dives under the max: the recorded defect of the
    # whole construction, asserted here so a silent change is noticed
    assert kit["beta"] < 0.0286
    assert kit["pair"].ordering_violation() > 0.0


def test_valid_budget_restores_ordering(kit, model):
    comp = kit["components"]
    hp = extend_H(integrate_h(0.06, THETA, model))
    sup = build_supersolution(hp, comp.phi1, comp.phi2)
    assert float(np.max(kit["sub"] - sup)) <= 1e-12


# ------------------------------------------------------- band constants

def test_band_constants_ordering(kit):
    c = kit["constants"]
    assert c.M0 < c.M1 < 0.0 < c.M3
    assert c.M0_prime < c.M2 < 0.0 < c.M4
    assert c.mu > 0.0 and c.mu0 > 0.0


def test_choose_beta_formula(kit):
    c = kit["constants"]
    expected = min(4.0 * c.mu ** 2, c.mu0 ** 2) * math.sin(ALPHA) ** 2
    assert kit["beta"] == pytest.approx(expected, rel=1e-12)


def test_measure_band_constants_requires_normalization(strip_pair):
    with pytest.raises(ValueError, match="normalized"):
        measure_band_constants(strip_pair["front_a"], strip_pair["front_b"],
                               THETA, ALPHA)


# ------------------------------------------------------------- regions

def test_region_grid_partitions_the_plane(kit):
    codes = classify_region_grid(kit["plane"], kit["constants"], ALPHA)
    assert codes.shape == (kit["plane"].nx + 1, kit["plane"].ny + 1)
    assert set(np.unique(codes)) <= {0, 1, 2}
    # all three regions are populated on this window
    assert {0, 1, 2} <= set(np.unique(codes))


def test_region_grid_agrees_with_pointwise(kit):
    grid = kit["plane"]
    codes = classify_region_grid(grid, kit["constants"], ALPHA)
    names = {0: "C", 1: "Z", 2: "H"}
    rng = np.random.default_rng(7)
    xs = grid.x_nodes()
    ys = grid.y_nodes()
    for _ in range(50):
        i = int(rng.integers(0, grid.nx + 1))
        j = int(rng.integers(0, grid.ny + 1))
        assert names[int(codes[i, j])] == classify_region(
            (xs[i], ys[j]), kit["constants"], ALPHA)


def test_tail_region_has_small_components(kit):
    codes = classify_region_grid(kit["plane"], kit["constants"], ALPHA)
    comp = kit["components"]
    in_c = codes == 0
    # by construction of M1/M2 both components stay at or below theta/2 in C
    assert float(comp.phi1[in_c].max()) <= THETA / 2.0 + 1e-9
    assert float(comp.phi2[in_c].max()) <= THETA / 2.0 + 1e-9
    assert float((comp.phi1 + comp.phi2)[in_c].max()) <= THETA + 1e-9


def test_burnt_region_has_large_components(kit):
    codes = classify_region_grid(kit["plane"], kit["constants"], ALPHA)
    comp = kit["components"]
    in_h = codes == 2
    assert float(comp.phi1[in_h].min()) >= 0.5 - 1e-9
    assert float(comp.phi2[in_h].min()) >= 0.5 - 1e-9


# ------------------------------------------------------------ residuals

def test_residual_shape_and_nan_ring(kit, noflow, model):
    grid = kit["plane"]
    res = residual(kit["sub"], 0.5, noflow, model, grid)
    assert res.shape == (grid.nx + 1, grid.ny + 1)
    assert np.all(np.isnan(res[0, :])) and np.all(np.isnan(res[-1, :]))
    assert np.all(np.isnan(res[:, 0])) and np.all(np.isnan(res[:, -1]))
    assert np.all(np.isfinite(res[1:-1, 1:-1]))


def test_residual_vanishes_on_exact_planar_solution(planar, noflow, model):
    # the tilted planar front solves the continuum equation exactly, so the
    # discrete residual is pure truncation error of size O(h^2)
    c0, prof = planar
    grid = PlaneGrid(x_max=4.0, y_max=4.0, nx=128, ny=128)
    ca, sa = math.cos(ALPHA), math.sin(ALPHA)
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    field = prof.sample(x * ca + y * sa)
    res = residual(field, c0 / sa, noflow, model, grid)
    assert float(np.nanmax(np.abs(res))) < 10.0 * grid.dy ** 2


def test_residual_detects_a_wrong_speed(planar, noflow, model):
    c0, prof = planar
    grid = PlaneGrid(x_max=4.0, y_max=4.0, nx=128, ny=128)
    ca, sa = math.cos(ALPHA), math.sin(ALPHA)
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    field = prof.sample(x * ca + y * sa)
    res = residual(field, c0 / sa + 0.2, noflow, model, grid)
    assert float(np.nanmax(np.abs(res))) > 0.01


def test_calibrated_floor_shrinks_under_refinement(planar, model):
    # the worst truncation sits at the ignition kink, where the third
    # derivative of the profile jumps: the floor there scales like h, not
    # like the h^2 of the smooth interior
    coarse = PlaneGrid(x_max=4.0, y_max=4.0, nx=64, ny=64)
    fine = PlaneGrid(x_max=4.0, y_max=4.0, nx=128, ny=128)
    _, prof = planar
    f_coarse = calibrate_residual_floor(prof, ALPHA, coarse, model)
    f_fine = calibrate_residual_floor(prof, ALPHA, fine, model)
    assert f_coarse > f_fine > 0.0
    assert 1.5 < f_coarse / f_fine < 8.0


# --------------------------------------------------------- certificates

def test_subsolution_certificate_passes(kit, cosine, model):
    cert = certify_subsolution_margin(
        kit["sub"], kit["components"], c=kit["c_formula"], flow=cosine,
        model=model, eps_disc=kit["eps"])
    assert cert.passed, (cert.max_deficit, kit["eps"])
    assert cert.violations == 0
    assert cert.nodes > 0


def test_subsolution_margin_guard(kit, cosine, model):
    with pytest.raises(ValueError, match="margin"):
        certify_subsolution_margin(
            kit["sub"], kit["components"], c=kit["c_formula"], flow=cosine,
            model=model, eps_disc=0.01, margin=10.0)


def test_supersolution_certificate_fails_by_design(kit, cosine, model):
    cert = certify_supersolution_cases(
        kit["super"], kit["components"], kit["constants"],
        kit["h_profile"], c=kit["c_formula"], flow=cosine, model=model,
        eps_disc=kit["eps"])
    assert not cert.passed
    # the geometric hypotheses behind the case split still hold
    assert cert.max_sum_in_C <= THETA + 1e-9
    assert cert.min_band_slope_in_Z > 0.0
