"""Acceptance suite: one test and one printed pass/fail line per criterion.

Every criterion is evaluated at its stated tolerance on the bundled
configurations.  Each test computes all of its parts first, appends a single
summary line (shown in the terminal summary), and only then asserts — so a
red criterion still reports every measured number.

The barrier-certification criteria (4 and 5) are expected to fail honestly:
the curvature budget that the slope-of-the-components argument allows is two
orders of magnitude below the smallest budget for which the gluing ODE
ascends through 1, so the glued profile is not increasing and the
supersolution built from it is not ordered above the subsolution.  The
tests state the criteria as written and let them fail.
"""

import dataclasses
import math
import time
from pathlib import Path
from types import SimpleNamespace

import pytest

from conical_fronts.barriers import calibrate_residual_floor, integrate_h
from conical_fronts.config import load_config
from conical_fronts.model import zero_reaction
from conical_fronts.pipeline import run_experiment

import conftest

ROOT = Path(__file__).resolve().parents[1]
PI3 = math.pi / 3.0
PI2 = math.pi / 2.0


def _line(num: int, passed: bool, text: str) -> None:
    mark = "PASS" if passed else "FAIL"
    conftest.ACCEPTANCE_LINES.append(f"criterion {num} {mark:<4} {text}")


def _report(manifest, name: str) -> dict:
    for rep in manifest.reports:
        if rep["name"] == name:
            return rep
    raise KeyError(f"no report named {name!r}; have "
                   f"{[r['name'] for r in manifest.reports]}")


def _alpha_name(base: str, alpha: float) -> str:
    return f"{base}(alpha={alpha:.6f})"


def _run(config, out, *, verb="run-all", grid_scale=1.0, warm=None):
    t0 = time.perf_counter()
    manifest = run_experiment(config, verb=verb, grid_scale=grid_scale,
                              out_dir=str(out), warm=warm)
    elapsed = time.perf_counter() - t0
    failed_stages = manifest.summary["stages_failed"]
    assert not failed_stages, (
        f"stages failed: {failed_stages}: "
        f"{[s.error for s in manifest.stages if s.error]}")
    return SimpleNamespace(manifest=manifest, elapsed=elapsed, config=config,
                           context=manifest.__dict__["context"])


# ----------------------------------------------------------------- fixtures

@pytest.fixture(scope="session")
def planar_run(tmp_path_factory):
    """Zero shear at the degenerate half-angle on the 512x512 window."""
    cfg = load_config(ROOT / "configs" / "planar_reduction.json")
    return _run(cfg, tmp_path_factory.mktemp("acc_planar"))


@pytest.fixture(scope="session")
def sweep_run(tmp_path_factory):
    """Cosine shear at both half-angles on the wide window."""
    cfg = load_config(ROOT / "configs" / "speed_formula_sweep.json")
    return _run(cfg, tmp_path_factory.mktemp("acc_sweep"))


@pytest.fixture(scope="session")
def barrier_run(sweep_run, tmp_path_factory):
    """Barrier construction and certificates on the bundled window,
    warm-started from the sweep's strip fronts."""
    cfg = load_config(ROOT / "configs" / "barrier_certification.json")
    return _run(cfg, tmp_path_factory.mktemp("acc_barrier"),
                verb="build-barriers", warm=sweep_run.context)


@pytest.fixture(scope="session")
def planar_scale2(planar_run, tmp_path_factory):
    """The planar-reduction run at doubled resolution, warm-started."""
    return _run(planar_run.config, tmp_path_factory.mktemp("acc_planar2"),
                grid_scale=2.0, warm=planar_run.context)


@pytest.fixture(scope="session")
def sweep_scale2(sweep_run, tmp_path_factory):
    """The formula sweep at doubled resolution, warm-started; the shift
    pair adds nothing to the speed-error comparison and is disabled."""
    cfg = dataclasses.replace(
        sweep_run.config,
        evolution=dataclasses.replace(sweep_run.config.evolution,
                                      run_shift_pair=False))
    return _run(cfg, tmp_path_factory.mktemp("acc_sweep2"),
                grid_scale=2.0, warm=sweep_run.context)


# ---------------------------------------------------------------- criteria

def test_criterion_1_planar_reduction_matches_oracle(planar_run):
    rep = _report(planar_run.manifest, "planar-reduction")
    err = rep["worst_violation"]
    budget = 300.0
    ok = bool(rep["passed"] and rep["tolerance"] == 0.01
              and planar_run.elapsed <= budget)
    _line(1, ok,
          f"planar reduction on 512x512: |c - c0|/c0 = {err:.3e} <= 0.01, "
          f"c0 = {rep['metadata']['c0_oracle']:.10f}, "
          f"c = {rep['metadata']['c_measured']:.10f}; "
          f"runtime {planar_run.elapsed:.0f}s <= {budget:.0f}s")
    assert rep["tolerance"] == 0.01
    assert rep["passed"], f"relative speed error {err:.3e} > 1%"
    assert planar_run.elapsed <= budget, (
        f"runtime {planar_run.elapsed:.0f}s exceeds 5 minutes")


def test_criterion_2_conical_speed_formula(sweep_run):
    reps = {a: _report(sweep_run.manifest, _alpha_name("speed-formula", a))
            for a in (PI3, PI2)}
    budget = 2 * 900.0
    ok = bool(all(r["passed"] and r["tolerance"] == 0.02
                  for r in reps.values())
              and sweep_run.elapsed <= budget)
    detail = ", ".join(
        f"alpha={a:.4f}: err {r['worst_violation']:.3e} <= 0.02"
        for a, r in reps.items())
    _line(2, ok, f"conical speed = strip speed / sin(alpha): {detail}; "
                 f"runtime {sweep_run.elapsed:.0f}s <= {budget:.0f}s "
                 f"(15 min per angle)")
    for a, r in reps.items():
        assert r["tolerance"] == 0.02
        assert r["passed"], (f"alpha={a}: formula error "
                             f"{r['worst_violation']:.3e} > 2%")
    assert sweep_run.elapsed <= budget


def test_criterion_3_speed_symmetry_of_even_shear(sweep_run):
    rep = _report(sweep_run.manifest, _alpha_name("speed-symmetry", PI3))
    gap = rep["worst_violation"]
    tol = rep["tolerance"]
    art = sweep_run.context.alpha_art(PI3)
    ok = bool(rep["passed"] and tol == pytest.approx(0.005 * art.est_A.c))
    _line(3, ok, f"mirror-variant strip speeds at alpha=pi/3: "
                 f"|c_A - c_B| = {gap:.3e} <= 0.5% of c_A = {tol:.3e}")
    assert tol == pytest.approx(0.005 * art.est_A.c)
    assert rep["passed"], f"|c_A - c_B| = {gap:.3e} exceeds 0.5% of c_A"


def test_criterion_4_gluing_ode_ascends(barrier_run, model, zero_model):
    art = barrier_run.context.alpha_art(PI3)
    beta_star = art.constants.beta
    t0 = time.perf_counter()
    outcomes = {}
    for mult in (1e-3, 1e-2, 1e-1, 1.0):
        prof = integrate_h(mult * beta_star, conftest.THETA, model)
        outcomes[mult] = bool(prof.increasing and prof.value_at_one > 1.0
                              and prof.value_at_two > 1.0)
    degenerate = integrate_h(beta_star, conftest.THETA, zero_model)
    elapsed = time.perf_counter() - t0
    deg_err = abs(degenerate.value_at_two - 4.0)
    ok = bool(all(outcomes.values()) and deg_err <= 1e-8 and elapsed <= 1.0)
    _line(4, ok,
          f"gluing ODE with budget beta* = {beta_star:.3e}: "
          f"ascent (increasing, h(1)>1, h(2)>1) at 1e-3x..1x = "
          f"{[outcomes[m] for m in (1e-3, 1e-2, 1e-1, 1.0)]}; "
          f"zero-reaction h(2) - 4 = {deg_err:.2e} <= 1e-8; "
          f"runtime {elapsed:.2f}s <= 1s")
    assert deg_err <= 1e-8
    assert elapsed <= 1.0
    for mult, good in outcomes.items():
        assert good, (
            f"budget {mult} x beta* = {mult * beta_star:.3e}: the glued "
            f"profile is not an ascent through 1 (the slope-budget choice "
            f"sits far below the smallest ascending budget)")


def test_criterion_5_barrier_certificates(barrier_run):
    art = barrier_run.context.alpha_art(PI3)
    ctx = barrier_run.context
    plane = barrier_run.config.plane_grid.grid()

    ordering = art.pair.ordering_violation()
    ordering_ok = ordering <= 0.0
    super_ok = bool(art.cert_super.passed)
    super_worst = max(c.max_residual for c in art.cert_super.cases)
    sub_ok = art.cert_sub is not None and bool(art.cert_sub.passed)
    sub_worst = art.cert_sub.max_deficit if art.cert_sub else float("nan")
    case_violations = sum(c.violations for c in art.cert_super.cases)
    floor = calibrate_residual_floor(ctx.planar_profile, PI3, plane,
                                     barrier_run.config.problem.build_model(),
                                     factor=1.0)
    eps_ok = art.eps_disc == pytest.approx(5.0 * floor, rel=1e-12)

    ok = bool(ordering_ok and super_ok and sub_ok
              and case_violations == 0 and eps_ok)
    _line(5, ok,
          f"barriers at alpha=pi/3, eps_disc = {art.eps_disc:.2e} "
          f"(= 5 x calibrated floor: {eps_ok}): "
          f"max(sub - super) = {ordering:+.3f} (want <= 0); "
          f"super residual worst = {super_worst:.3f} vs +eps "
          f"({'PASS' if super_ok else 'FAIL'}); "
          f"sub deficit worst = {sub_worst:.2e} vs -eps "
          f"({'PASS' if sub_ok else 'FAIL'}); "
          f"case report violations = {case_violations} (want 0)")
    assert eps_ok
    assert sub_ok, (f"subsolution residual deficit {sub_worst:.3e} "
                    f"exceeds eps_disc off the margin band")
    assert ordering_ok, (
        f"sub exceeds super by {ordering:.3f}: the glued profile built from "
        f"the admissible curvature budget turns over instead of reaching 1, "
        f"so pointwise ordering cannot hold")
    assert super_ok, (
        f"supersolution residual {super_worst:.3f} exceeds +eps_disc "
        f"= {art.eps_disc:.2e}: the defective gluing leaves the reaction "
        f"term active where the certificate needs it switched off")
    assert case_violations == 0


def test_criterion_6_monotone_in_y(sweep_run):
    reps = {a: _report(sweep_run.manifest, _alpha_name("monotone-in-y", a))
            for a in (PI3, PI2)}
    ok = bool(all(r["passed"] and r["tolerance"] == 1e-10
                  for r in reps.values()))
    detail = ", ".join(
        f"alpha={a:.4f}: min dy-diff = {-r['worst_violation']:.2e}"
        for a, r in reps.items())
    _line(6, ok, f"steady conical fields increase in y: {detail} "
                 f"(want >= -1e-10)")
    for a, r in reps.items():
        assert r["tolerance"] == 1e-10
        assert r["passed"], (f"alpha={a}: min forward y-difference "
                             f"{-r['worst_violation']:.3e} < -1e-10")


def test_criterion_7_conical_limits(sweep_run):
    reps = {a: _report(sweep_run.manifest, _alpha_name("cone-limits", a))
            for a in (PI3, PI2)}
    parts = []
    ok = True
    for a, r in reps.items():
        meta = r["metadata"]
        levels = meta["levels"]
        y_max = sweep_run.config.plane_grid.y_max
        sup_deep = meta["sup_lower_cones"][-1]
        inf_high = meta["inf_upper_cones"][-1]
        deepest_ok = levels[-1] == pytest.approx(0.8 * y_max)
        ok = ok and bool(r["passed"] and len(levels) == 5 and deepest_ok)
        parts.append(f"alpha={a:.4f}: sup(low cone at -0.8 y_max) = "
                     f"{sup_deep:.4f} <= 0.05, inf(high cone at +0.8 y_max) "
                     f"= {inf_high:.4f} >= 0.95")
    _line(7, ok, "; ".join(parts) + " with monotone level sequences (5 levels)")
    for a, r in reps.items():
        meta = r["metadata"]
        assert len(meta["levels"]) == 5
        assert meta["levels"][-1] == pytest.approx(
            0.8 * sweep_run.config.plane_grid.y_max)
        assert meta["thresholds"] == [0.05, 0.95]
        assert r["passed"], f"alpha={a}: cone-limit violation " \
                            f"{r['worst_violation']:.3e} > 0"


def test_criterion_8_uniqueness_up_to_shift(sweep_run):
    reps = {a: _report(sweep_run.manifest, _alpha_name("shift-uniqueness", a))
            for a in (PI3, PI2)}
    ok = bool(all(r["passed"] and r["tolerance"] == 1e-2
                  for r in reps.values()))
    detail = ", ".join(
        f"alpha={a:.4f}: max|A - shift(B)| = {r['worst_violation']:.2e} "
        f"(shift {r['metadata']['shift']:+.3f})"
        for a, r in reps.items())
    _line(8, ok, f"independently evolved fronts align after a vertical "
                 f"shift: {detail} (want <= 1e-2)")
    for a, r in reps.items():
        assert r["tolerance"] == 1e-2
        assert r["passed"], (f"alpha={a}: aligned max-norm gap "
                             f"{r['worst_violation']:.3e} > 1e-2")


def test_criterion_9_speed_errors_shrink_under_refinement(
        planar_run, planar_scale2, sweep_run, sweep_scale2):
    cases = []
    coarse = _report(planar_run.manifest, "planar-reduction")
    fine = _report(planar_scale2.manifest, "planar-reduction")
    cases.append(("planar", coarse["worst_violation"],
                  fine["worst_violation"]))
    for a in (PI3, PI2):
        name = _alpha_name("speed-formula", a)
        cases.append((f"alpha={a:.4f}",
                      _report(sweep_run.manifest, name)["worst_violation"],
                      _report(sweep_scale2.manifest, name)["worst_violation"]))
    ratios = {label: (e1 / e2 if e2 > 0 else float("inf"))
              for label, e1, e2 in cases}
    ok = bool(all(r >= 3.0 for r in ratios.values()))
    detail = ", ".join(
        f"{label}: {e1:.2e} -> {e2:.2e} (x{ratios[label]:.1f})"
        for label, e1, e2 in cases)
    _line(9, ok, f"speed errors under --grid-scale 2: {detail} "
                 f"(want shrink >= x3)")
    for label, e1, e2 in cases:
        assert ratios[label] >= 3.0, (
            f"{label}: error went {e1:.3e} -> {e2:.3e} "
            f"(x{ratios[label]:.2f} < x3)")
