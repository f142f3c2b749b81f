"""Shared fixtures: one planar oracle, one small strip solve, one barrier kit.

The expensive artifacts are session-scoped so the whole unit suite pays for
the strip solves exactly once.  Acceptance runs manage their own pipeline
sessions in test_acceptance.py.
"""

import math

import numpy as np
import pytest

from conical_fronts.barriers import (BarrierPair, PlaneGrid,
                                     build_components, build_subsolution,
                                     build_supersolution,
                                     calibrate_residual_floor, choose_beta,
                                     extend_H, integrate_h,
                                     measure_band_constants)
from conical_fronts.model import (cosine_flow, diffusion_matrix,
                                  quadratic_ignition, zero_flow,
                                  zero_reaction)
from conical_fronts.planar import planar_front_speed_1d
from conical_fronts.strip import (FrontProfile, PeriodicStripGrid,
                                  StripSolveOptions, normalize_front,
                                  reflect_profile, solve_pulsating_front)

THETA = 0.3
ALPHA = math.pi / 3.0

# one pass/fail line per acceptance criterion, printed in the terminal
# summary by the hook below so `pytest -v` always shows them
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def model():
    return quadratic_ignition(THETA)


@pytest.fixture(scope="session")
def zero_model():
    return zero_reaction(THETA)


@pytest.fixture(scope="session")
def cosine():
    return cosine_flow(0.5, 1.0)


@pytest.fixture(scope="session")
def noflow():
    return zero_flow(1.0)


@pytest.fixture(scope="session")
def planar(model):
    """(c0, profile) of the 1-d front; the speed every other test leans on."""
    return planar_front_speed_1d(model)


@pytest.fixture(scope="session")
def strip_grid_small():
    return PeriodicStripGrid(period_length=1.0, nx=64, y_max=7.5, ny=160)


@pytest.fixture(scope="session")
def strip_pair(model, cosine, planar, strip_grid_small):
    """Small pulsating-front solves for both diffusion variants at pi/3.

    A is solved from a planar broadcast seed; B is warm-started from the
    reflected A front, which is the exact B solution up to the solver
    tolerance because the cosine flow is even in x.
    """
    c0, prof = planar
    grid = strip_grid_small
    seed = np.broadcast_to(prof.sample(grid.y_nodes())[None, :],
                           (grid.nx, grid.ny + 1)).copy()
    opts = StripSolveOptions(c_guess=c0, initial_values=seed)
    est_a, front_a = solve_pulsating_front(
        diffusion_matrix(ALPHA, "A"), cosine, ALPHA, model, grid, opts)
    seed_b = reflect_profile(front_a).values
    opts_b = StripSolveOptions(c_guess=est_a.c, initial_values=seed_b)
    est_b, front_b = solve_pulsating_front(
        diffusion_matrix(ALPHA, "B"), cosine, ALPHA, model, grid, opts_b)
    return {"est_a": est_a, "front_a": front_a,
            "est_b": est_b, "front_b": front_b}


@pytest.fixture(scope="session")
def plane_small():
    # rotated span 4.5 cos(pi/3) + 5.0 sin(pi/3) = 6.58 fits inside the
    # strip fixture's |Y| <= 7.5
    return PlaneGrid(x_max=4.5, y_max=5.0, nx=96, ny=112)


@pytest.fixture(scope="session")
def kit(model, planar, strip_pair, plane_small):
    """Barrier construction artifacts shared by the barrier/evolve tests."""
    phi = normalize_front(strip_pair["front_a"], THETA)
    psi = normalize_front(strip_pair["front_b"], THETA)
    constants = measure_band_constants(phi, psi, THETA, ALPHA)
    beta = choose_beta(constants, ALPHA)
    h_profile = extend_H(integrate_h(beta, THETA, model))
    comp = build_components(phi, psi, ALPHA, plane_small)
    sub = build_subsolution(comp.phi1, comp.phi2)
    sup = build_supersolution(h_profile, comp.phi1, comp.phi2)
    pair = BarrierPair(sub=sub, super=sup, constants=constants,
                       components=comp, h_profile=h_profile)
    _, prof = planar
    eps = calibrate_residual_floor(prof, ALPHA, plane_small, model)
    return {"phi": phi, "psi": psi, "constants": constants, "beta": beta,
            "h_profile": h_profile, "components": comp, "sub": sub,
            "super": sup, "pair": pair, "plane": plane_small, "eps": eps,
            "c_formula": strip_pair["est_a"].c / math.sin(ALPHA)}
