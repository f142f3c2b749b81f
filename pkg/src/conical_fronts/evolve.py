"""Time evolution of the conical-front equation on a plane window.

Marches u_t = Laplace(u) + q(x) u_y + f(u) (optionally in a frame descending
at ``frame_speed``, which turns the advection into q(x) - frame_speed) with
the fused RK2 kernels, Dirichlet 0/1 on the bottom/top rows and mirror
(Neumann) lateral sides.

Renormalization keeps the u = 1/2 level of the x = 0 column near y = 0 by
shifting whole grid rows (exact copies, no interpolation); the sub-row
remainder enters the displacement bookkeeping instead, so the lab-frame
level positions — and hence both speed estimates, the least-squares trace
fit and the endpoint displacement rate — are quantization-free.

When ``adapt_frame`` is on, the frame speed is steered toward the true front
speed by nulling the measured mass drift ((1/(2 x_max)) d/dt of the total
mass equals the descent rate of a translating profile exactly).  Once the
correction falls below tolerance the frame freezes; in the frozen frame the
steady-state metric compares row-aligned snapshots and genuinely decays to
the 1e-6-per-unit-time contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from . import _kernels
from .barriers import PlaneGrid
from .model import CombustionNonlinearity, ShearFlow
from .strip import SolverError, SpeedEstimate

__all__ = [
    "EvolutionState",
    "SpeedTrace",
    "EvolveOptions",
    "EvolveResult",
    "FormulaCheck",
    "initial_state",
    "evolve",
    "measure_speed",
    "compare_speed_formula",
]


@dataclass
class EvolutionState:
    """Field + clocks of one evolution.

    ``frame_shift`` is the accumulated renormalization displacement (whole
    rows times dy); ``frame_phase`` the integral of the frame speed, so a
    stored level at ordinate y sits at y + frame_shift - frame_phase in the
    lab frame.
    """

    grid: PlaneGrid
    u: np.ndarray
    t: float = 0.0
    frame_shift: float = 0.0
    dt: float = float("nan")
    frame_phase: float = 0.0


@dataclass
class SpeedTrace:
    """Sampled lab-frame positions of the half-level on the x = 0 column."""

    times: np.ndarray
    level_positions: np.ndarray
    fitted_speed: float
    fit_residual: float


@dataclass(frozen=True)
class EvolveOptions:
    """Tunables for :func:`evolve` (defaults meet the contracts)."""

    frame_speed: float = 0.0
    adapt_frame: bool = True
    renormalize: bool = True
    t_max: float = 400.0
    check_interval: float = 0.1
    confirm_checks: int = 50
    steady_tol: float = 1e-6          # max-norm change per unit time
    adapt_window: float = 1.0
    adapt_tol: float = 2e-6
    adapt_max_step: float = 0.05
    min_settle: float = 8.0
    min_fit_time: float = 6.0
    boundary_margin: float = 1.0      # stop when the level gets this close
    duration_only: bool = False       # run to t_max without requiring steadiness
    record_times: tuple = ()
    cfl: float = 0.2
    table_size: int = _kernels.TABLE_SIZE
    # far-field descent of the front per unit |x| (cot of the half-angle);
    # the lateral ghost columns extend the field along this slope so oblique
    # wings leave the box without reflection.  0 = flat mirror extension.
    wing_slope: float = 0.0
    # hold the two lateral wall columns fixed at their initial values
    # (time-independent Dirichlet data in the moving frame).  This tethers
    # the far-field wings in shape, angle, and frame position: slope
    # conditions alone admit a spurious bowed steady state that travels
    # faster than the conical front.  Requires ``renormalize=False`` (row
    # shifts would slide the interior past the pinned columns).
    wall_anchor: bool = False


@dataclass
class EvolveResult:
    """Evolution outcome: final state, steady field, trace, and diagnostics."""

    state: EvolutionState
    steady: np.ndarray
    trace: SpeedTrace
    converged: bool
    frame_speed_final: float
    shift_speed: float                # endpoint displacement estimate
    checks: int
    clip_excess: float                # worst overshoot outside [0, 1] seen
    snapshots: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class FormulaCheck:
    """Comparison of a measured conical speed with a strip speed / sin(alpha)."""

    passed: bool
    expected: float
    measured: float
    rel_error: float
    tol: float


def initial_state(grid: PlaneGrid, values: np.ndarray) -> EvolutionState:
    """Wrap a plane field as an evolution state (Dirichlet rows enforced)."""
    u = np.ascontiguousarray(np.asarray(values, dtype=float).copy())
    if u.shape != (grid.nx + 1, grid.ny + 1):
        raise ValueError(f"field shape {u.shape} does not match grid nodes "
                         f"{(grid.nx + 1, grid.ny + 1)}")
    u[:, 0] = 0.0
    u[:, -1] = 1.0
    return EvolutionState(grid=grid, u=u)


def _half_level(u: np.ndarray, y: np.ndarray, i0: int, near: float) -> float:
    """Ordinate where column i0 crosses 1/2, at the crossing nearest ``near``."""
    col = u[i0, :]
    sign = col - 0.5
    cross = np.nonzero(sign[:-1] * sign[1:] <= 0.0)[0]
    if cross.size == 0:
        raise SolverError("the u = 1/2 level left the domain on the x = 0 column")
    mids = y[cross] + (0.5 - col[cross]) / (col[cross + 1] - col[cross]) \
        * (y[1] - y[0])
    k = int(np.argmin(np.abs(mids - near)))
    return float(mids[k])


def _shift_rows(u: np.ndarray, k: int) -> None:
    """In-place content shift by k rows (k > 0 moves content down)."""
    if k > 0:
        u[:, :-k] = u[:, k:]
        u[:, -k:] = 1.0
    elif k < 0:
        u[:, -k:] = u[:, :k]
        u[:, : -k] = 0.0
    u[:, 0] = 0.0
    u[:, -1] = 1.0


def evolve(initial: EvolutionState, flow: ShearFlow,
           model: CombustionNonlinearity,
           options: EvolveOptions | None = None) -> EvolveResult:
    """March the conical equation to a traveling steady state.

    Returns once the row-aligned change stays below ``steady_tol`` per unit
    time for ``confirm_checks`` consecutive checks (with the frame adaptation
    frozen), or at ``t_max`` when ``duration_only``.  Raises
    :class:`SolverError` when the half-level approaches the top/bottom
    boundary or the time budget expires without convergence.
    """
    opts = options or EvolveOptions()
    grid = initial.grid
    u = np.ascontiguousarray(np.asarray(initial.u, dtype=float).copy())
    u[:, 0] = 0.0
    u[:, -1] = 1.0
    y = grid.y_nodes()
    x = grid.x_nodes()
    i0 = int(np.argmin(np.abs(x)))
    if abs(x[i0]) > 1e-12:
        raise ValueError("the grid must contain the x = 0 column (even nx)")

    if model.family == "quadratic":
        quad_scale: Optional[float] = float(model.params[0])
        table, inv_du = None, 0.0
    else:
        quad_scale = None
        table, inv_du = _kernels.reaction_table(model, opts.table_size)

    ix2 = 1.0 / grid.dx ** 2
    iy2 = 1.0 / grid.dy ** 2
    iyh = 1.0 / (2.0 * grid.dy)
    q = flow(x)
    gob = opts.wing_slope * grid.dx / grid.dy
    if abs(gob) >= 1.0:
        raise ValueError(
            f"wing_slope {opts.wing_slope} too steep for this grid: "
            f"|wing_slope|*dx/dy = {abs(gob):.3f} must stay below 1")

    V = opts.frame_speed
    work = u.copy()

    anchor = opts.wall_anchor
    if anchor:
        if opts.renormalize:
            raise ValueError("wall_anchor requires renormalize=False: row "
                             "shifts would slide the interior past the "
                             "pinned wall columns")
        wl_cur = u[0, :].copy()
        wr_cur = u[-1, :].copy()

    def dt_for(v: float) -> float:
        diff = opts.cfl * min(grid.dx ** 2, grid.dy ** 2) / 2.0
        amax = float(np.max(np.abs(q - v))) + 1e-30
        return min(diff, 0.25 * grid.dy / amax,
                   0.5 / (model.lipschitz_bound + 1e-30))

    record = sorted(opts.record_times)
    snapshots: dict = {}
    if record and record[0] <= 0.0:
        snapshots[record.pop(0)] = u.copy()

    times: list[float] = []
    labs: list[float] = []
    t = initial.t
    off = initial.frame_shift
    phase = initial.frame_phase
    prev_u: Optional[np.ndarray] = None
    prev_level = 0.0
    prev_t = t
    streak = 0
    checks = 0
    clip_excess = 0.0
    converged = False
    adapting = opts.adapt_frame
    calm = 0
    mass_base = float(u.sum())
    mass_t0 = t
    level = 0.0
    fit_start_t = t

    adv = np.ascontiguousarray(q - V)
    dt = dt_for(V)

    def step_block(n: int) -> None:
        if quad_scale is not None:
            for _ in range(n):
                _kernels.plane_step_quad(u, work, adv, ix2, iy2, iyh, dt,
                                         model.theta, quad_scale, gob)
                if anchor:
                    u[0, :] = wl_cur
                    u[-1, :] = wr_cur
        else:
            for _ in range(n):
                _kernels.plane_step_table(u, work, adv, ix2, iy2, iyh, dt,
                                          model.theta, table, inv_du, gob)
                if anchor:
                    u[0, :] = wl_cur
                    u[-1, :] = wr_cur

    while True:
        # advance one check interval (split at any requested snapshot time)
        target = t + opts.check_interval
        while record and record[0] <= target + 1e-12:
            t_rec = record.pop(0)
            n = max(0, int(round((t_rec - t) / dt)))
            step_block(n)
            phase += V * (n * dt)
            t += n * dt
            snapshots[t_rec] = u.copy()
        n = max(1, int(round((target - t) / dt)))
        step_block(n)
        phase += V * (n * dt)
        t += n * dt
        checks += 1

        lo, hi = float(u.min()), float(u.max())
        clip_excess = max(clip_excess, -lo, hi - 1.0, 0.0)
        np.clip(u, 0.0, 1.0, out=u)

        level = _half_level(u, y, i0, near=level)
        if min(level - y[0], y[-1] - level) < opts.boundary_margin:
            raise SolverError(
                f"half-level at y = {level:.2f} is within {opts.boundary_margin}"
                " of the boundary; enlarge y_max or fix the frame speed")
        times.append(t)
        labs.append(level + off - phase)

        if opts.renormalize:
            k = int(round(level / grid.dy))
            if k != 0:
                before = float(u.sum())
                _shift_rows(u, k)
                mass_base += float(u.sum()) - before
                off += k * grid.dy
                level -= k * grid.dy

        # steadiness metric on level-aligned snapshots: sample the previous
        # field at y + (prev_level - level) so the comparison anchors both
        # snapshots at their measured front positions.  This removes the
        # translation floor left by the frozen frame speed's residual error;
        # translation linearity is certified separately by the trace fit.
        if prev_u is not None and abs(prev_level - level) <= grid.dy:
            s = (prev_level - level) / grid.dy
            k0 = int(math.floor(s))
            wgt = s - k0
            j = np.arange(grid.ny + 1)
            jj = j + k0
            valid = (jj >= 0) & (jj + 1 <= grid.ny)
            b = ((1.0 - wgt) * prev_u[:, jj[valid]]
                 + wgt * prev_u[:, jj[valid] + 1])
            metric = float(np.max(np.abs(u[:, valid] - b))) / (t - prev_t)
            if metric < opts.steady_tol and not adapting:
                streak += 1
            else:
                streak = 0
        else:
            streak = 0
        prev_u = u.copy()
        prev_level = level
        prev_t = t

        # frame-speed adaptation by mass-drift nulling
        if adapting and t - mass_t0 >= opts.adapt_window:
            drift = ((float(u.sum()) - mass_base) * grid.dx * grid.dy
                     / (2.0 * grid.x_max) / (t - mass_t0))
            if abs(drift) <= opts.adapt_tol and t >= opts.min_settle:
                calm += 1
                if calm >= 2:
                    adapting = False
                    fit_start_t = t
            else:
                calm = 0
            step = min(max(drift, -opts.adapt_max_step), opts.adapt_max_step)
            if adapting and abs(step) > 0.0:
                V += step
                adv = np.ascontiguousarray(q - V)
                dt = dt_for(V)
            mass_base = float(u.sum())
            mass_t0 = t

        if not opts.duration_only and streak >= opts.confirm_checks \
                and t - fit_start_t >= opts.min_fit_time:
            converged = True
            break
        if t >= opts.t_max:
            if opts.duration_only:
                break
            raise SolverError(
                f"no traveling steady state within t_max = {opts.t_max} "
                f"(streak {streak}/{opts.confirm_checks})")

    ts = np.asarray(times)
    ls = np.asarray(labs)
    est = _fit_last_half(ts, ls)
    trace = SpeedTrace(times=ts, level_positions=ls,
                       fitted_speed=est[0], fit_residual=est[1])
    half = len(ts) // 2
    shift_speed = ((ls[half] - ls[-1]) / (ts[-1] - ts[half])
                   if len(ts) >= 2 else float("nan"))

    state = EvolutionState(grid=grid, u=u, t=t, frame_shift=off, dt=dt,
                           frame_phase=phase)
    return EvolveResult(state=state, steady=u.copy(), trace=trace,
                        converged=converged, frame_speed_final=V,
                        shift_speed=shift_speed, checks=checks,
                        clip_excess=clip_excess, snapshots=snapshots)


def _fit_last_half(ts: np.ndarray, ls: np.ndarray) -> tuple[float, float]:
    """(descent speed, RMS residual) of a linear fit over the last half."""
    n = len(ts)
    if n < 4:
        return float("nan"), float("nan")
    sl = slice(n // 2, n)
    A = np.stack([np.ones(n - n // 2), ts[sl]], axis=-1)
    coef, *_ = np.linalg.lstsq(A, ls[sl], rcond=None)
    resid = ls[sl] - A @ coef
    return -float(coef[1]), float(np.sqrt(np.mean(resid ** 2)))


def measure_speed(trace: SpeedTrace, *, min_samples: int = 20) -> SpeedEstimate:
    """Least-squares descent speed over the last half of the trace.

    ``bracket`` is twice the slope standard error; raises when fewer than
    ``min_samples`` samples exist or the trace is visibly nonlinear (RMS
    above 1% of the traversed distance).
    """
    n = len(trace.times)
    if n < min_samples:
        raise ValueError(f"need at least {min_samples} trace samples, got {n}")
    sl = slice(n // 2, n)
    ts = trace.times[sl]
    ls = trace.level_positions[sl]
    A = np.stack([np.ones_like(ts), ts], axis=-1)
    coef, *_ = np.linalg.lstsq(A, ls, rcond=None)
    resid = ls - A @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    traversed = abs(float(ls[-1] - ls[0]))
    if traversed > 0 and rms > 0.01 * traversed:
        raise ValueError(
            f"trace deviates from linear motion: RMS {rms:.3e} vs traversed "
            f"{traversed:.3e}; the run has not reached a traveling state")
    m = len(ts)
    tbar = float(np.mean(ts))
    denom = float(np.sum((ts - tbar) ** 2))
    stderr = rms / math.sqrt(denom) * math.sqrt(m / max(m - 2, 1))
    return SpeedEstimate(c=-float(coef[1]), residual=rms, iterations=m,
                         bracket=2.0 * stderr, method="trace-fit")


def compare_speed_formula(measured, c_strip, alpha: float,
                          tol: float) -> FormulaCheck:
    """Check measured conical speed against (strip speed) / sin(alpha)."""
    cm = float(getattr(measured, "c", measured))
    cs = float(getattr(c_strip, "c", c_strip))
    expected = cs / math.sin(alpha)
    rel = abs(cm - expected) / abs(expected)
    return FormulaCheck(passed=bool(rel <= tol), expected=expected,
                        measured=cm, rel_error=rel, tol=tol)
