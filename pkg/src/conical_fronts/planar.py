"""One-dimensional traveling-front oracle for ignition reactions.

For U'' - c U' + f(U) = 0 with U(-inf) = 0, U(+inf) = 1 and an ignition
nonlinearity, the unique speed c0 and monotone profile are computed in the
phase plane: with p(U) = U' > 0,

    dp/dU = c - f(U)/p,      p(theta) = c * theta,

because below the cutoff the equation is linear (U' = cU exactly, so the
orbit enters the burning range with slope c*theta).  The profile reaches
U = 1 with p(1) = 0 precisely at the front speed; for larger c the orbit
survives with p(1) > 0 and for smaller c it crashes to p = 0 early.  That
sign is monotone in c, so bisection pins c0 to arbitrary tolerance.

The returned profile carries the exact exponential tails
U(y) = theta * exp(c0 y) below the cutoff and
1 - U(y) ~ exp(lambda_minus y) above the burning range, glued to a
quadrature of dy = dU / p(U) in between.  This module is deliberately
independent of the two-dimensional solvers so it can serve as an oracle
for them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .model import CombustionNonlinearity, eval_f

__all__ = ["PlanarProfile", "SpeedBracketError", "planar_front_speed_1d"]

#: p values below this are treated as a crashed phase-plane orbit.
P_FLOOR = 1e-14

#: Tabulate the profile with the ODE up to this distance from U = 1, then
#: switch to the exact linearized tail (avoids the integrable 1/p blow-up).
TAIL_CUT = 1e-6


class SpeedBracketError(RuntimeError):
    """No sign change in the speed bracket after expansion (degenerate f)."""


@dataclass(frozen=True)
class PlanarProfile:
    """Monotone 1-d front profile normalized to U(0) = theta.

    ``y``/``u``/``du_dy`` sample the profile on a uniform mesh spanning
    [-span, span]; ``sample``/``slope`` evaluate it anywhere, using the exact
    exponential tails outside the tabulated core.
    """

    c0: float
    theta: float
    y: np.ndarray
    u: np.ndarray
    du_dy: np.ndarray
    bracket: float
    iterations: int
    decay_rate: float           # lambda_minus < 0, tail rate of 1 - U
    _core_y: np.ndarray
    _core_u: np.ndarray
    _core_p: np.ndarray

    def sample(self, y) -> np.ndarray:
        """U at arbitrary ordinates (vectorized)."""
        yy = np.asarray(y, dtype=float)
        out = np.empty_like(yy)
        lo = yy <= self._core_y[0]
        hi = yy >= self._core_y[-1]
        mid = ~(lo | hi)
        out[lo] = self.theta * np.exp(self.c0 * (yy[lo] - self._core_y[0]))
        tail = 1.0 - self._core_u[-1]
        out[hi] = 1.0 - tail * np.exp(self.decay_rate * (yy[hi] - self._core_y[-1]))
        if np.any(mid):
            out[mid] = self._u_interp(yy[mid])
        return out if out.ndim else float(out)

    def slope(self, y) -> np.ndarray:
        """dU/dy at arbitrary ordinates (vectorized)."""
        yy = np.asarray(y, dtype=float)
        out = np.empty_like(yy)
        lo = yy <= self._core_y[0]
        hi = yy >= self._core_y[-1]
        mid = ~(lo | hi)
        out[lo] = self.c0 * self.theta * np.exp(self.c0 * (yy[lo] - self._core_y[0]))
        tail = 1.0 - self._core_u[-1]
        out[hi] = -self.decay_rate * tail * np.exp(
            self.decay_rate * (yy[hi] - self._core_y[-1]))
        if np.any(mid):
            out[mid] = self._p_interp(yy[mid])
        return out if out.ndim else float(out)

    @property
    def _u_interp(self):
        cache = self.__dict__.get("_u_interp_cache")
        if cache is None:
            cache = PchipInterpolator(self._core_y, self._core_u)
            self.__dict__["_u_interp_cache"] = cache
        return cache

    @property
    def _p_interp(self):
        cache = self.__dict__.get("_p_interp_cache")
        if cache is None:
            cache = PchipInterpolator(self._core_y, self._core_p)
            self.__dict__["_p_interp_cache"] = cache
        return cache


def _shoot(c: float, model: CombustionNonlinearity, n: int) -> float:
    """RK4 in U for dp/dU = c - f(U)/p from (theta, c*theta) to U = 1.

    Returns p(1) when the orbit survives, else -1.0 (crashed).  The sign of
    the outcome is nondecreasing in c.
    """
    theta = model.theta
    h = (1.0 - theta) / n
    p = c * theta
    u = theta
    fev = model.evaluator
    for _ in range(n):
        if p <= P_FLOOR:
            return -1.0
        # the evaluator is only valid strictly inside (theta, 1); clamp the
        # stage abscissae to the open interval
        u1 = min(u + 0.5 * h, 1.0 - 1e-15)
        u2 = min(u + h, 1.0 - 1e-15)
        k1 = c - _f_in(fev, u, theta) / p
        p2 = p + 0.5 * h * k1
        if p2 <= P_FLOOR:
            return -1.0
        k2 = c - _f_in(fev, u1, theta) / p2
        p3 = p + 0.5 * h * k2
        if p3 <= P_FLOOR:
            return -1.0
        k3 = c - _f_in(fev, u1, theta) / p3
        p4 = p + h * k3
        if p4 <= P_FLOOR:
            return -1.0
        k4 = c - _f_in(fev, u2, theta) / p4
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        u += h
    return p if p > P_FLOOR else -1.0


def _f_in(fev, u: float, theta: float) -> float:
    """Evaluator restricted to the open burning range, zero at the ends."""
    if u <= theta or u >= 1.0:
        return 0.0
    return float(fev(u))


def planar_front_speed_1d(
    model: CombustionNonlinearity,
    *,
    step: float = 5e-5,
    bracket_tol: float = 1e-10,
    span: float = 24.0,
    points: int = 4097,
    c_max: float = 64.0,
) -> tuple[float, PlanarProfile]:
    """Front speed and profile of U'' - c U' + f(U) = 0, U(-inf)=0, U(+inf)=1.

    ``step`` is the phase-plane RK4 resolution in U (halve it for a
    Richardson consistency check); ``bracket_tol`` the bisection width on c.
    Raises :class:`SpeedBracketError` if no crash/survive sign change exists
    in (0, c_max] — e.g. for f == 0, where every positive speed survives.
    """
    theta = model.theta
    n = max(64, int(round((1.0 - theta) / step)))

    lo, hi = 1e-4, 1.0
    # lower end must crash, upper end must survive; expand/shrink geometrically
    tries = 0
    while _shoot(lo, model, n) > 0.0:
        lo *= 0.25
        tries += 1
        if lo < 1e-13:
            raise SpeedBracketError(
                "every trial speed survives the phase plane; "
                "the reaction term looks degenerate (f == 0?)")
    while _shoot(hi, model, n) < 0.0:
        hi *= 2.0
        tries += 1
        if hi > c_max:
            raise SpeedBracketError(
                f"no surviving speed below c_max={c_max}; cannot bracket")
    iterations = tries
    while hi - lo > bracket_tol:
        mid = 0.5 * (lo + hi)
        if _shoot(mid, model, n) > 0.0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    c0 = 0.5 * (lo + hi)

    profile = _build_profile(c0, model, span=span, points=points,
                             bracket=hi - lo, iterations=iterations)
    return c0, profile


def _decay_rate(c: float, model: CombustionNonlinearity) -> float:
    """lambda_minus = (c - sqrt(c^2 - 4 f'(1))) / 2 < 0.

    f'(1) is measured by a one-sided second-order difference so arbitrary
    (non-closed-form) families work.
    """
    du = min(model.r / 8.0, 1e-5)
    a = eval_f(1.0 - du, model)
    b = eval_f(1.0 - 2.0 * du, model)
    fp1 = (b - 4.0 * a) / (2.0 * du)   # ~ f'(1) < 0 for ignition families
    disc = c * c - 4.0 * fp1
    return 0.5 * (c - math.sqrt(disc))


def _build_profile(c0: float, model: CombustionNonlinearity, *, span: float,
                   points: int, bracket: float, iterations: int) -> PlanarProfile:
    theta = model.theta
    # U mesh: uniform through the burning range, geometric refinement toward 1
    # (1/p is integrable but steepens like 1/(1-U)).
    u_core = np.linspace(theta, 1.0 - 1e-3, 12001)
    u_tail = 1.0 - np.geomspace(1e-3, TAIL_CUT, 4001)
    u_mesh = np.concatenate([u_core, u_tail[1:]])

    # integrate p along the mesh with RK4 on each (nonuniform) panel
    p_mesh = np.empty_like(u_mesh)
    p_mesh[0] = c0 * theta
    fev = model.evaluator
    p = p_mesh[0]
    for k in range(len(u_mesh) - 1):
        u = u_mesh[k]
        h = u_mesh[k + 1] - u
        u1 = min(u + 0.5 * h, 1.0 - 1e-15)
        u2 = min(u + h, 1.0 - 1e-15)
        k1 = c0 - _f_in(fev, u, theta) / p
        k2 = c0 - _f_in(fev, u1, theta) / (p + 0.5 * h * k1)
        k3 = c0 - _f_in(fev, u1, theta) / (p + 0.5 * h * k2)
        k4 = c0 - _f_in(fev, u2, theta) / (p + h * k3)
        p_next = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if p_next <= P_FLOOR:
            # converged-speed orbit grazed zero inside the mesh: stop early
            u_mesh = u_mesh[: k + 1]
            p_mesh = p_mesh[: k + 1]
            break
        p = p_next
        p_mesh[k + 1] = p

    # ordinate by quadrature of dy = dU/p, normalized to y(theta) = 0
    inv_p = 1.0 / p_mesh
    y_mesh = np.concatenate([
        [0.0],
        np.cumsum(0.5 * np.diff(u_mesh) * (inv_p[:-1] + inv_p[1:])),
    ])

    lam = _decay_rate(c0, model)
    y_grid = np.linspace(-span, span, points)
    core_interp_u = PchipInterpolator(y_mesh, u_mesh)
    core_interp_p = PchipInterpolator(y_mesh, p_mesh)

    u_grid = np.empty_like(y_grid)
    p_grid = np.empty_like(y_grid)
    lo = y_grid <= 0.0
    hi = y_grid >= y_mesh[-1]
    mid = ~(lo | hi)
    u_grid[lo] = theta * np.exp(c0 * y_grid[lo])
    p_grid[lo] = c0 * u_grid[lo]
    tail = 1.0 - u_mesh[-1]
    u_grid[hi] = 1.0 - tail * np.exp(lam * (y_grid[hi] - y_mesh[-1]))
    p_grid[hi] = -lam * tail * np.exp(lam * (y_grid[hi] - y_mesh[-1]))
    u_grid[mid] = core_interp_u(y_grid[mid])
    p_grid[mid] = core_interp_p(y_grid[mid])

    return PlanarProfile(
        c0=c0,
        theta=theta,
        y=y_grid,
        u=u_grid,
        du_dy=p_grid,
        bracket=bracket,
        iterations=iterations,
        decay_rate=lam,
        _core_y=y_mesh,
        _core_u=u_mesh,
        _core_p=p_mesh,
    )
