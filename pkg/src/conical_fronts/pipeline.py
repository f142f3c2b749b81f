"""End-to-end experiments: validate -> planar oracle -> strip solves ->
barriers -> evolution -> verification, with timings, speed bookkeeping, and
a JSON-able run manifest.

Stages are independent records: a failing stage is captured (status
"failed") and its dependents are marked "skipped", so a manifest always
comes back describing how far the run got and every check that was
evaluated.  The overall summary passes only when every evaluated check
passed and no stage failed.
"""

from __future__ import annotations

import dataclasses
import math
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__ as _pkg_version
from .barriers import (BarrierPair, HProfile, build_components,
                       build_subsolution, build_supersolution,
                       calibrate_residual_floor, certify_subsolution_margin,
                       certify_supersolution_cases, choose_beta,
                       classify_region_grid, extend_H, integrate_h,
                       measure_band_constants)
from .config import ExperimentConfig
from .evolve import (EvolveOptions, EvolveResult, compare_speed_formula,
                     evolve, initial_state, measure_speed)
from .io import (write_barrier_csv, write_h_profile_csv, write_json,
                 write_profile_csv, write_speed_json, write_trace_csv)
from .model import (ConeRegion, reaction_antiderivative, validate_flow,
                    validate_nonlinearity)
from .planar import planar_front_speed_1d
from .strip import (FrontProfile, PeriodicStripGrid, SpeedEstimate,
                    StripSolveOptions, check_speed_symmetry, normalize_front,
                    reflect_profile, resample_profile, solve_pulsating_front)
from .verify import (check_comparison_on_cone, check_cone_limits,
                     check_monotone_y, check_ordering, check_shift_uniqueness)

__all__ = [
    "StageRecord",
    "RunManifest",
    "AlphaArtifacts",
    "RunContext",
    "run_experiment",
    "emit_report",
    "STAGE_SEQUENCE",
    "stages_for_verb",
]

STAGE_SEQUENCE = ("validate", "solve-planar", "solve-pulsating",
                  "build-barriers", "evolve", "verify")

_VERB_LAST_STAGE = {
    "validate": "validate",
    "solve-planar": "solve-planar",
    "solve-pulsating": "solve-pulsating",
    "build-barriers": "build-barriers",
    "evolve": "evolve",
    "verify": "verify",
    "run-all": "verify",
}


def stages_for_verb(verb: str) -> tuple[str, ...]:
    if verb not in _VERB_LAST_STAGE:
        raise ValueError(f"unknown verb {verb!r}; choose from "
                         f"{sorted(_VERB_LAST_STAGE)}")
    last = STAGE_SEQUENCE.index(_VERB_LAST_STAGE[verb])
    return STAGE_SEQUENCE[: last + 1]


@dataclass
class StageRecord:
    name: str
    status: str            # "ok" | "failed" | "skipped"
    seconds: float
    error: Optional[str] = None
    detail: dict = field(default_factory=dict)


@dataclass
class AlphaArtifacts:
    """Everything computed for one half-angle."""

    alpha: float
    strip_grid: Optional[PeriodicStripGrid] = None
    est_A: Optional[SpeedEstimate] = None
    prof_A: Optional[FrontProfile] = None
    est_B: Optional[SpeedEstimate] = None
    prof_B: Optional[FrontProfile] = None
    phi: Optional[FrontProfile] = None      # normalized A front
    psi: Optional[FrontProfile] = None      # normalized B front
    constants: Any = None
    h_profile: Optional[HProfile] = None
    pair: Optional[BarrierPair] = None
    eps_disc: float = float("nan")
    cert_super: Any = None
    cert_sub: Any = None
    c_formula: float = float("nan")
    evolution: Optional[EvolveResult] = None
    measured: Optional[SpeedEstimate] = None
    evolution_pair: Optional[EvolveResult] = None
    shift: float = float("nan")
    reports: list = field(default_factory=list)


@dataclass
class RunContext:
    """Mutable bag of artifacts shared across stages (and across runs for
    warm starts)."""

    config: ExperimentConfig
    c0: float = float("nan")
    planar_profile: Any = None
    per_alpha: dict = field(default_factory=dict)

    def alpha_art(self, alpha: float) -> AlphaArtifacts:
        key = round(float(alpha), 12)
        if key not in self.per_alpha:
            self.per_alpha[key] = AlphaArtifacts(alpha=float(alpha))
        return self.per_alpha[key]


@dataclass
class RunManifest:
    """Serializable record of one experiment run."""

    config: dict
    versions: dict
    stages: list
    speeds: list
    reports: list
    summary: dict

    def to_dict(self) -> dict:
        from .io import jsonable
        return jsonable(self)


def _versions() -> dict:
    import sys

    import numba
    import scipy
    return {
        "package": _pkg_version,
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": numba.__version__,
    }


# ----------------------------------------------------------------------
# stage implementations
# ----------------------------------------------------------------------

def _stage_validate(ctx: RunContext, record: StageRecord) -> None:
    cfg = ctx.config
    model = cfg.problem.build_model()
    flow = cfg.problem.build_flow()
    nl = validate_nonlinearity(model)
    fl = validate_flow(flow)
    record.detail["nonlinearity"] = dataclasses.asdict(nl)
    record.detail["flow"] = dataclasses.asdict(fl)
    if not nl.passed:
        raise ValueError(f"reaction term failed validation: {nl}")
    if not fl.passed:
        raise ValueError(f"shear flow failed validation: {fl}")


def _stage_planar(ctx: RunContext, record: StageRecord) -> None:
    model = ctx.config.problem.build_model()
    c0, profile = planar_front_speed_1d(model)
    ctx.c0 = c0
    ctx.planar_profile = profile
    record.detail.update(c0=c0, bracket=profile.bracket,
                         iterations=profile.iterations)


def _solve_one_strip(cfg: ExperimentConfig, alpha: float, variant: str,
                     c_guess: float, initial: Optional[np.ndarray]
                     ) -> tuple[SpeedEstimate, FrontProfile, PeriodicStripGrid]:
    from .model import diffusion_matrix
    model = cfg.problem.build_model()
    flow = cfg.problem.build_flow()
    grid = cfg.strip_grid.extended_grid(cfg.problem.period, alpha,
                                        cfg.plane_grid)
    opts = StripSolveOptions(
        c_guess=c_guess,
        speed_bracket=cfg.tolerances.speed_bracket,
        drift_tol=cfg.tolerances.drift_tol,
        initial_values=initial,
    )
    matrix = diffusion_matrix(alpha, variant)
    est, prof = solve_pulsating_front(matrix, flow, alpha, model, grid, opts)
    return est, prof, grid


def _alpha_strip_task(payload: dict) -> dict:
    """Worker: solve the A and B strips for one half-angle."""
    from .config import config_from_dict
    cfg = config_from_dict(payload["config"])
    alpha = payload["alpha"]
    warm_A = payload.get("warm_A")
    warm_B = payload.get("warm_B")
    est_A, prof_A, grid = _solve_one_strip(cfg, alpha, "A",
                                           payload["c_guess"], warm_A)
    if abs(math.cos(alpha)) < 1e-14:
        # the two variants are the same problem when the mixed entry vanishes
        est_B, prof_B = est_A, FrontProfile(grid=grid,
                                            values=prof_A.values.copy(),
                                            variant="B")
    else:
        if warm_B is None:
            warm_B = reflect_profile(prof_A).values
        est_B, prof_B = _solve_one_strip(cfg, alpha, "B", est_A.c, warm_B)[:2]
    return {"alpha": alpha, "est_A": est_A, "values_A": prof_A.values,
            "est_B": est_B, "values_B": prof_B.values,
            "grid": (grid.period_length, grid.nx, grid.y_max, grid.ny)}


def _stage_strips(ctx: RunContext, record: StageRecord, jobs: int,
                  warm: Optional[RunContext]) -> None:
    cfg = ctx.config
    payloads = []
    for alpha in cfg.problem.alphas:
        guess = ctx.c0 if math.isfinite(ctx.c0) else 1.0
        payload = {"config": cfg.to_dict(), "alpha": float(alpha),
                   "c_guess": guess}
        if warm is not None:
            w = warm.alpha_art(alpha)
            if w.prof_A is not None:
                grid = cfg.strip_grid.extended_grid(cfg.problem.period, alpha,
                                                    cfg.plane_grid)
                payload["warm_A"] = resample_profile(w.prof_A, grid)
                payload["warm_B"] = resample_profile(w.prof_B, grid)
                payload["c_guess"] = w.est_A.c
        payloads.append(payload)

    if jobs > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_alpha_strip_task, payloads))
    else:
        results = [_alpha_strip_task(p) for p in payloads]

    for res in results:
        art = ctx.alpha_art(res["alpha"])
        L, nx, y_max, ny = res["grid"]
        grid = PeriodicStripGrid(period_length=L, nx=nx, y_max=y_max, ny=ny)
        art.strip_grid = grid
        art.est_A = res["est_A"]
        art.prof_A = FrontProfile(grid=grid, values=res["values_A"], variant="A")
        art.est_B = res["est_B"]
        art.prof_B = FrontProfile(grid=grid, values=res["values_B"], variant="B")
        tol = ctx.config.tolerances.symmetry_rtol * art.est_A.c
        sym_ok = check_speed_symmetry(art.est_A, art.est_B, tol)
        art.reports.append({
            "name": f"speed-symmetry(alpha={res['alpha']:.6f})",
            "passed": bool(sym_ok),
            "worst_violation": abs(art.est_A.c - art.est_B.c),
            "tolerance": tol,
        })
        record.detail[f"alpha={res['alpha']:.6f}"] = {
            "c_A": art.est_A.c, "c_B": art.est_B.c,
            "bracket": art.est_A.bracket,
            "strip_y_max": grid.y_max, "strip_ny": grid.ny,
        }


def _stage_barriers(ctx: RunContext, record: StageRecord) -> None:
    cfg = ctx.config
    model = cfg.problem.build_model()
    flow = cfg.problem.build_flow()
    theta = cfg.problem.theta
    plane = cfg.plane_grid.grid()
    for alpha in cfg.problem.alphas:
        art = ctx.alpha_art(alpha)
        art.phi = normalize_front(art.prof_A, theta)
        art.psi = normalize_front(art.prof_B, theta)
        constants = measure_band_constants(art.phi, art.psi, theta, alpha)
        beta = choose_beta(constants, alpha)
        art.constants = dataclasses.replace(constants, beta=beta)
        art.h_profile = extend_H(integrate_h(beta, theta, model))
        comp = build_components(art.phi, art.psi, alpha, plane)
        sub = build_subsolution(comp.phi1, comp.phi2)
        sup = build_supersolution(art.h_profile, comp.phi1, comp.phi2)
        art.pair = BarrierPair(sub=sub, super=sup, constants=art.constants,
                               components=comp, h_profile=art.h_profile)
        art.c_formula = art.est_A.c / math.sin(alpha)
        art.eps_disc = calibrate_residual_floor(ctx.planar_profile, alpha,
                                                plane, model)
        art.cert_super = certify_supersolution_cases(
            sup, comp, art.constants, art.h_profile, c=art.c_formula,
            flow=flow, model=model, eps_disc=art.eps_disc)
        # At alpha = pi/2 the two rotated components coincide, so there is no
        # region where one clearly dominates: the kink-exclusion audit of the
        # max has an empty domain and is skipped rather than failed.
        sub_margin = 0.05
        comp_gap = float(np.max(np.abs(comp.phi1 - comp.phi2)))
        if comp_gap > sub_margin:
            art.cert_sub = certify_subsolution_margin(
                sub, comp, c=art.c_formula, flow=flow, model=model,
                eps_disc=art.eps_disc, margin=sub_margin)
        else:
            art.cert_sub = None
        hp = art.h_profile
        art.reports.extend([
            {"name": f"h-profile-valid(alpha={alpha:.6f})",
             "passed": bool(hp.increasing and hp.value_at_one > 1.0
                            and hp.value_at_two > 1.0),
             "worst_violation": float(min(hp.value_at_one - 1.0,
                                          hp.value_at_two - 1.0)),
             "tolerance": 0.0,
             "metadata": {"beta": hp.beta, "h(1)": hp.value_at_one,
                          "h(2)": hp.value_at_two,
                          "turning_value": hp.turning_value,
                          "energy_residual": hp.energy_residual}},
            {"name": f"barrier-ordering-static(alpha={alpha:.6f})",
             "passed": bool(art.pair.ordering_violation() <= 0.0),
             "worst_violation": art.pair.ordering_violation(),
             "tolerance": 0.0},
            {"name": f"supersolution-certificate(alpha={alpha:.6f})",
             "passed": bool(art.cert_super.passed),
             "worst_violation": max(c.max_residual for c in art.cert_super.cases),
             "tolerance": art.eps_disc,
             "metadata": {"cases": [dataclasses.asdict(c)
                                    for c in art.cert_super.cases],
                          "pointwise_slope_criterion":
                              art.cert_super.pointwise_slope_criterion}},
        ])
        if art.cert_sub is not None:
            art.reports.append(
                {"name": f"subsolution-certificate(alpha={alpha:.6f})",
                 "passed": bool(art.cert_sub.passed),
                 "worst_violation": art.cert_sub.max_deficit,
                 "tolerance": art.eps_disc,
                 "metadata": {"nodes": art.cert_sub.nodes,
                              "margin": art.cert_sub.margin}})
        record.detail[f"alpha={alpha:.6f}"] = {
            "beta": beta, "mu": constants.mu, "mu0": constants.mu0,
            "M1": constants.M1, "M3": constants.M3,
            "eps_disc": art.eps_disc,
            "h_increasing": hp.increasing, "h(1)": hp.value_at_one,
            "component_gap": comp_gap,
            "subsolution_audit": ("run" if art.cert_sub is not None else
                                  "skipped: components coincide within the "
                                  "kink margin (degenerate half-angle)"),
        }


def _upper_pair_initial(art: AlphaArtifacts, model, theta: float) -> np.ndarray:
    """Front-like state above the subsolution to seed the uniqueness pair.

    The audited gluing profile uses the slope-budget curvature, which turns
    over and goes negative, so the field it glues has no half-level crossing
    and cannot seed an evolution.  The pair only needs some genuine upper
    front: rebuild the gluing with budget 2 F(1), for which the energy
    identity keeps h' > 0 through h = 1 (2 beta > F everywhere).
    """
    hp = art.h_profile
    if not (hp.increasing and hp.value_at_one > 1.0):
        beta_up = 2.0 * reaction_antiderivative(1.0, model)
        hp = extend_H(integrate_h(beta_up, theta, model))
    comp = art.pair.components
    upper = np.minimum(build_supersolution(hp, comp.phi1, comp.phi2), 1.0)
    return np.maximum(upper, art.pair.sub)


def _initial_field(kind: str, art: AlphaArtifacts, plane) -> np.ndarray:
    if kind == "subsolution":
        return art.pair.sub.copy()
    if kind == "supersolution":
        return np.minimum(art.pair.super, 1.0)
    if kind == "ramp":
        y = plane.y_nodes()[None, :]
        return np.broadcast_to(np.clip(y + 0.5, 0.0, 1.0),
                               (plane.nx + 1, plane.ny + 1)).copy()
    raise ValueError(f"unknown initial data kind {kind!r}")


def _evolve_opts(cfg: ExperimentConfig, frame_speed: float,
                 alpha: float) -> EvolveOptions:
    ev = cfg.evolution
    slope = math.cos(alpha) / math.sin(alpha)
    if ev.speed_only:
        return EvolveOptions(frame_speed=frame_speed, adapt_frame=True,
                             renormalize=True, duration_only=True,
                             t_max=ev.duration,
                             check_interval=ev.check_interval,
                             min_settle=min(ev.min_settle, ev.duration / 2),
                             steady_tol=cfg.tolerances.steady_tol,
                             wing_slope=slope)
    return EvolveOptions(frame_speed=frame_speed, adapt_frame=True,
                         renormalize=True, t_max=ev.t_max,
                         check_interval=ev.check_interval,
                         confirm_checks=ev.confirm_checks,
                         steady_tol=cfg.tolerances.steady_tol,
                         min_settle=ev.min_settle,
                         wing_slope=slope)


def _stage_evolve(ctx: RunContext, record: StageRecord,
                  warm: Optional[RunContext]) -> None:
    cfg = ctx.config
    model = cfg.problem.build_model()
    flow = cfg.problem.build_flow()
    plane = cfg.plane_grid.grid()
    for alpha in cfg.problem.alphas:
        art = ctx.alpha_art(alpha)
        init_kind = cfg.evolution.initial_data
        field0 = _initial_field(init_kind, art, plane)
        frame0 = art.c_formula
        if warm is not None:
            w = warm.alpha_art(alpha)
            if w.evolution is not None:
                field0 = _upsample_plane(w.evolution.steady,
                                         warm.config.plane_grid.grid(), plane)
                frame0 = w.measured.c if w.measured else frame0
        opts = _evolve_opts(cfg, frame0, alpha)
        art.evolution = evolve(initial_state(plane, field0), flow, model, opts)
        art.measured = measure_speed(art.evolution.trace)
        agree = (abs(art.measured.c - art.evolution.shift_speed)
                 / abs(art.measured.c))
        formula = compare_speed_formula(art.measured, art.est_A, alpha,
                                        cfg.tolerances.formula_rtol)
        art.reports.append({
            "name": f"speed-estimators-agree(alpha={alpha:.6f})",
            "passed": bool(agree <= cfg.tolerances.estimator_rtol),
            "worst_violation": agree,
            "tolerance": cfg.tolerances.estimator_rtol,
            "metadata": {"trace_fit": art.measured.c,
                         "endpoint_displacement": art.evolution.shift_speed},
        })
        art.reports.append({
            "name": f"speed-formula(alpha={alpha:.6f})",
            "passed": formula.passed,
            "worst_violation": formula.rel_error,
            "tolerance": formula.tol,
            "metadata": dataclasses.asdict(formula),
        })
        if cfg.problem.flow_amplitude == 0.0 and abs(alpha - math.pi / 2) < 1e-12:
            rel = abs(art.measured.c - ctx.c0) / ctx.c0
            art.reports.append({
                "name": "planar-reduction",
                "passed": bool(rel <= cfg.tolerances.planar_rtol),
                "worst_violation": rel,
                "tolerance": cfg.tolerances.planar_rtol,
                "metadata": {"c0_oracle": ctx.c0, "c_measured": art.measured.c},
            })
        if cfg.evolution.run_shift_pair and not cfg.evolution.speed_only:
            if init_kind != "supersolution":
                field1 = _upper_pair_initial(art, model, cfg.problem.theta)
            else:
                field1 = _initial_field("subsolution", art, plane)
            art.evolution_pair = evolve(initial_state(plane, field1), flow,
                                        model, opts)
        record.detail[f"alpha={alpha:.6f}"] = {
            "measured_c": art.measured.c,
            "frame_speed_final": art.evolution.frame_speed_final,
            "converged": art.evolution.converged,
            "checks": art.evolution.checks,
            "clip_excess": art.evolution.clip_excess,
        }


def _upsample_plane(values: np.ndarray, old, new) -> np.ndarray:
    from scipy.interpolate import RectBivariateSpline
    sp = RectBivariateSpline(old.x_nodes(), old.y_nodes(), values, kx=3, ky=3)
    out = sp(new.x_nodes(), new.y_nodes())
    return np.clip(out, 0.0, 1.0)


def _row_shifted(u: np.ndarray, k: int) -> np.ndarray:
    """Field moved up by k rows: out(y) = u(y + k dy) (exact row copy)."""
    out = np.empty_like(u)
    if k > 0:
        out[:, :-k] = u[:, k:]
        out[:, -k:] = 1.0
    elif k < 0:
        out[:, -k:] = u[:, :k]
        out[:, :-k] = 0.0
    else:
        out[:] = u
    return out


def _stage_verify(ctx: RunContext, record: StageRecord) -> None:
    cfg = ctx.config
    plane = cfg.plane_grid.grid()
    theta = cfg.problem.theta
    for alpha in cfg.problem.alphas:
        art = ctx.alpha_art(alpha)
        steady = art.evolution.steady
        mono = check_monotone_y(steady, plane, cfg.tolerances.monotone_tol)
        cone = check_cone_limits(steady, plane, alpha)
        order = check_ordering(art.pair.sub, steady, art.pair.super, plane,
                               tol=art.eps_disc)
        k = 3
        upper_field = _row_shifted(steady, k)
        rho_bound = (1.0 + theta) / 2.0
        noise = cfg.tolerances.monotone_tol
        cmp_up = check_comparison_on_cone(
            steady, upper_field, plane,
            ConeRegion(alpha, 0.55 * plane.y_max, "upper"), rho_bound,
            tol=noise)
        cmp_lo = check_comparison_on_cone(
            steady, upper_field, plane,
            ConeRegion(alpha, -0.55 * plane.y_max, "lower"), theta,
            tol=noise)
        for rep in (mono, cone, order, cmp_up, cmp_lo):
            art.reports.append({
                "name": f"{rep.check_name}(alpha={alpha:.6f})",
                "passed": rep.passed,
                "worst_violation": rep.worst_violation,
                "tolerance": rep.tolerance,
                "metadata": rep.metadata,
            })
        if art.evolution_pair is not None:
            shift, rep = check_shift_uniqueness(
                art.evolution.steady, art.evolution_pair.steady, plane,
                tol=cfg.tolerances.shift_tol)
            art.shift = shift
            art.reports.append({
                "name": f"{rep.check_name}(alpha={alpha:.6f})",
                "passed": rep.passed,
                "worst_violation": rep.worst_violation,
                "tolerance": rep.tolerance,
                "metadata": rep.metadata,
            })
        record.detail[f"alpha={alpha:.6f}"] = {
            "monotone": mono.passed, "cone_limits": cone.passed,
            "ordering": order.passed,
        }


def _emit_outputs(ctx: RunContext, out_dir: Path) -> None:
    cfg = ctx.config
    if not cfg.outputs.emit_csv:
        return
    if ctx.planar_profile is not None:
        write_json(out_dir / "planar_speed.json",
                   {"c0": ctx.c0, "bracket": ctx.planar_profile.bracket,
                    "iterations": ctx.planar_profile.iterations})
    plane = cfg.plane_grid.grid()
    for art in ctx.per_alpha.values():
        tag = f"alpha_{art.alpha:.4f}".replace(".", "p")
        d = out_dir / tag
        if art.prof_A is not None:
            write_profile_csv(d / "front_A.csv", art.prof_A)
            write_profile_csv(d / "front_B.csv", art.prof_B)
            g = art.strip_grid
            grid_info = {"nx": g.nx, "ny": g.ny, "y_max": g.y_max,
                         "period": g.period_length}
            write_speed_json(d / "speed_A.json", art.est_A, variant="A",
                             alpha=art.alpha, grid=grid_info)
            write_speed_json(d / "speed_B.json", art.est_B, variant="B",
                             alpha=art.alpha, grid=grid_info)
        if art.h_profile is not None:
            write_h_profile_csv(d / "h_profile.csv", art.h_profile)
        if art.pair is not None:
            region = classify_region_grid(plane, art.constants, art.alpha)
            write_barrier_csv(d / "barriers.csv", plane, art.pair, region)
            write_json(d / "certificates.json",
                       {"supersolution": art.cert_super,
                        "subsolution": art.cert_sub,
                        "eps_disc": art.eps_disc,
                        "constants": art.constants})
        if art.evolution is not None:
            write_trace_csv(d / "trace.csv", art.evolution.trace)
            if art.measured is not None:
                write_speed_json(d / "speed_measured.json", art.measured,
                                 alpha=art.alpha,
                                 frame_speed=art.evolution.frame_speed_final,
                                 shift_estimate=art.evolution.shift_speed)


# ----------------------------------------------------------------------
# driver
# ----------------------------------------------------------------------

def run_experiment(config: ExperimentConfig, *, verb: str = "run-all",
                   jobs: int = 1, grid_scale: float = 1.0,
                   out_dir: Optional[str] = None,
                   warm: Optional[RunContext] = None) -> RunManifest:
    """Run the requested stages; returns a manifest (context attached as
    ``manifest.context`` for warm starts and tests)."""
    if grid_scale != 1.0:
        config = config.scaled(grid_scale)
    ctx = RunContext(config=config)
    wanted = stages_for_verb(verb)
    out = Path(out_dir) if out_dir is not None else Path(config.outputs.directory)

    runners = {
        "validate": lambda rec: _stage_validate(ctx, rec),
        "solve-planar": lambda rec: _stage_planar(ctx, rec),
        "solve-pulsating": lambda rec: _stage_strips(ctx, rec, jobs, warm),
        "build-barriers": lambda rec: _stage_barriers(ctx, rec),
        "evolve": lambda rec: _stage_evolve(ctx, rec, warm),
        "verify": lambda rec: _stage_verify(ctx, rec),
    }

    stages: list[StageRecord] = []
    failed = False
    for name in wanted:
        rec = StageRecord(name=name, status="ok", seconds=0.0)
        if failed:
            rec.status = "skipped"
            stages.append(rec)
            continue
        t0 = time.perf_counter()
        try:
            runners[name](rec)
        except Exception as exc:  # noqa: BLE001 — recorded, not swallowed
            rec.status = "failed"
            rec.error = "".join(traceback.format_exception_only(exc)).strip()
            failed = True
        rec.seconds = time.perf_counter() - t0
        stages.append(rec)

    speeds: list[dict] = []
    if math.isfinite(ctx.c0):
        speeds.append({"name": "planar-1d-oracle", "c": ctx.c0})
    reports: list[dict] = []
    for key in sorted(ctx.per_alpha):
        art = ctx.per_alpha[key]
        if art.est_A is not None:
            speeds.append({"name": f"strip-A(alpha={art.alpha:.6f})",
                           **dataclasses.asdict(art.est_A)})
            speeds.append({"name": f"strip-B(alpha={art.alpha:.6f})",
                           **dataclasses.asdict(art.est_B)})
        if math.isfinite(art.c_formula):
            speeds.append({"name": f"formula-c_A/sin(alpha={art.alpha:.6f})",
                           "c": art.c_formula})
        if art.measured is not None:
            speeds.append({"name": f"conical-measured(alpha={art.alpha:.6f})",
                           **dataclasses.asdict(art.measured)})
        reports.extend(art.reports)

    evaluated = [r for r in reports if r.get("passed") is not None]
    summary = {
        "passed": (not failed) and all(r["passed"] for r in evaluated),
        "checks_evaluated": len(evaluated),
        "checks_failed": [r["name"] for r in evaluated if not r["passed"]],
        "stages_failed": [s.name for s in stages if s.status == "failed"],
    }

    manifest = RunManifest(config=config.to_dict(), versions=_versions(),
                           stages=stages, speeds=speeds, reports=reports,
                           summary=summary)
    manifest.__dict__["context"] = ctx
    try:
        _emit_outputs(ctx, out)
        emit_report(manifest, out)
    except OSError as exc:
        summary["emit_error"] = str(exc)
    return manifest


def emit_report(manifest: RunManifest, out_dir, formats=("json", "csv")) -> list:
    """Write manifest.json and flat CSV summaries of speeds and checks."""
    import csv as _csv
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "json" in formats:
        p = out / "manifest.json"
        write_json(p, manifest.to_dict())
        written.append(p)
    if "csv" in formats:
        p = out / "speeds.csv"
        with p.open("w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["name", "c", "residual", "bracket", "iterations"])
            for s in manifest.speeds:
                w.writerow([s.get("name"), repr(s.get("c")),
                            repr(s.get("residual", "")),
                            repr(s.get("bracket", "")),
                            s.get("iterations", "")])
        written.append(p)
        p = out / "checks.csv"
        with p.open("w", newline="") as fh:
            w = _csv.writer(fh)
            w.writerow(["name", "passed", "worst_violation", "tolerance"])
            for r in manifest.reports:
                w.writerow([r.get("name"), r.get("passed"),
                            repr(r.get("worst_violation", "")),
                            repr(r.get("tolerance", ""))])
        written.append(p)
    return written
