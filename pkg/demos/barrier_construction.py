"""Sub/supersolution barriers glued from two rotated strip fronts.

Normalizes the two variant fronts, rotates them onto the plane along the
cone directions, takes the max as the subsolution, composes the sum with
the gluing profile as the supersolution candidate, and audits both against
the calibrated discretization floor.  The printed certificates show the
construction's actual state: the subsolution audit passes, while the
curvature budget that the component slopes admit is far below the budget
the gluing profile needs to ascend, so the supersolution cases and the
pointwise ordering fail — the numbers quantify by how much.

Run:  python3 demos/barrier_construction.py     (about two minutes)
"""

import math
import pathlib

import numpy as np

from conical_fronts.barriers import (PlaneGrid, build_components,
                                     build_subsolution, build_supersolution,
                                     calibrate_residual_floor,
                                     certify_subsolution_margin,
                                     certify_supersolution_cases, choose_beta,
                                     classify_region_grid, extend_H,
                                     integrate_h, measure_band_constants)
from conical_fronts.model import (cosine_flow, diffusion_matrix,
                                  quadratic_ignition)
from conical_fronts.planar import planar_front_speed_1d
from conical_fronts.strip import (PeriodicStripGrid, StripSolveOptions,
                                  normalize_front, reflect_profile,
                                  solve_pulsating_front)

OUT = pathlib.Path(__file__).parent / "output"
ALPHA = math.pi / 3.0
THETA = 0.3


def main() -> None:
    model = quadratic_ignition(THETA)
    flow = cosine_flow(0.5, 1.0)
    grid = PeriodicStripGrid(period_length=1.0, nx=64, y_max=7.5, ny=160)
    plane = PlaneGrid(x_max=4.5, y_max=5.0, nx=96, ny=112)

    c0, prof = planar_front_speed_1d(model)
    seed = np.broadcast_to(prof.sample(grid.y_nodes())[None, :],
                           (grid.nx, grid.ny + 1)).copy()
    est, front_a = solve_pulsating_front(
        diffusion_matrix(ALPHA, "A"), flow, ALPHA, model, grid,
        StripSolveOptions(c_guess=c0, initial_values=seed))
    est_b, front_b = solve_pulsating_front(
        diffusion_matrix(ALPHA, "B"), flow, ALPHA, model, grid,
        StripSolveOptions(c_guess=est.c,
                          initial_values=reflect_profile(front_a).values))

    phi = normalize_front(front_a, THETA)
    psi = normalize_front(front_b, THETA)
    constants = measure_band_constants(phi, psi, THETA, ALPHA)
    beta = choose_beta(constants, ALPHA)
    print(f"band thresholds M1..M4 = {constants.M1:.4f} {constants.M2:.4f} "
          f"{constants.M3:.4f} {constants.M4:.4f}")
    print(f"slope floors  mu = {constants.mu:.4f}  mu0 = {constants.mu0:.4f}")
    print(f"admissible curvature budget beta = {beta:.3e}")

    h_profile = extend_H(integrate_h(beta, THETA, model))
    print(f"gluing profile: increasing = {h_profile.increasing}, "
          f"h(1) = {h_profile.value_at_one:.3f} (needs > 1)")

    comp = build_components(phi, psi, ALPHA, plane)
    sub = build_subsolution(comp.phi1, comp.phi2)
    sup = build_supersolution(h_profile, comp.phi1, comp.phi2)
    region = classify_region_grid(plane, constants, ALPHA)
    counts = {code: int(np.sum(region == k))
              for k, code in {0: "C", 1: "Z", 2: "H"}.items()}
    print(f"region partition counts: {counts}")
    print(f"pointwise ordering max(sub - super) = "
          f"{float(np.max(sub - sup)):+.4f} (a valid pair needs <= 0)")

    c_formula = est.c / math.sin(ALPHA)
    eps = calibrate_residual_floor(prof, ALPHA, plane, model)
    print(f"calibrated residual floor eps_disc = {eps:.3e}")
    cert_sub = certify_subsolution_margin(sub, comp, c=c_formula, flow=flow,
                                          model=model, eps_disc=eps)
    print(f"subsolution audit: passed = {cert_sub.passed}, worst deficit = "
          f"{cert_sub.max_deficit:.2e} over {cert_sub.nodes} nodes")
    cert_sup = certify_supersolution_cases(sup, comp, constants, h_profile,
                                           c=c_formula, flow=flow,
                                           model=model, eps_disc=eps)
    print(f"supersolution audit: passed = {cert_sup.passed}")
    for case in cert_sup.cases:
        print(f"  case {case.name:<24} nodes = {case.nodes:<6} "
              f"max residual = {case.max_residual:+.3e} "
              f"violations = {case.violations}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print("matplotlib not available; skipping the figure")
        return
    OUT.mkdir(exist_ok=True)
    x, y = plane.x_nodes(), plane.y_nodes()
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.8), sharey=True)
    for ax, field, title in ((axes[0], sub, "subsolution max(phi1, phi2)"),
                             (axes[1], np.minimum(sup, 1.0),
                              "supersolution (clipped at 1)"),
                             (axes[2], region.astype(float),
                              "regions C / Z / H")):
        im = ax.pcolormesh(x, y, field.T, shading="auto")
        ax.set(xlabel="x", title=title)
        fig.colorbar(im, ax=ax)
    axes[0].set_ylabel("y")
    fig.tight_layout()
    path = OUT / "barriers.png"
    fig.savefig(path, dpi=130)
    print(f"figure -> {path}")


if __name__ == "__main__":
    main()
