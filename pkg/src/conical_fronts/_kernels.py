"""Compiled time-stepping kernels.

Both solvers advance u_t = div(M grad u) + a(x) u_y + f(u) with an explicit
midpoint (RK2) step fused into two sweeps:

    stage 1:  w = u + (dt/2) * F(u)        (writes the scratch array)
    stage 2:  u = u + dt * F(w)            (in place; F(w) reads only w)

Strip kernels: X-periodic, Dirichlet rows j = 0 and j = ny (never written),
9-point stencil with the mixed-derivative cross term of an anisotropic
matrix ((1, m), (m, 1)).

Plane kernels: isotropic Laplacian, Dirichlet top/bottom rows, and
wing-following lateral ghosts: the ghost column outside each side wall is
the mirror value plus ``gob * (u[i, j+1] - u[i, j-1])`` with
gob = wing_slope * dx / dy, which discretizes the homogeneous directional
derivative along the oblique far-field front (wing_slope = cot(half-angle));
gob = 0 reduces to the plain mirror (flat Neumann) extension.

The reaction term has two paths: a closed-form quadratic ignition
scale * max(u - theta, 0) * max(1 - u, 0) (branch-free, fastest) and a
linear-interpolation table on [theta, 1] for arbitrary ignition families.
Coefficients are premultiplied by the caller:

    ix2 = 1/dx^2,  iy2 = 1/dy^2,  cxy = m/(2 dx dy),  iyh = 1/(2 dy),

and ``adv`` is the per-column advection coefficient (q sin(alpha) - c on the
strip, q - frame_speed on the plane).
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .model import CombustionNonlinearity, eval_f

__all__ = [
    "reaction_table",
    "strip_step_quad",
    "strip_step_table",
    "plane_step_quad",
    "plane_step_table",
]

#: Size of the reaction lookup table (linear interpolation error ~ (1/n)^2).
TABLE_SIZE = 16384


def reaction_table(model: CombustionNonlinearity,
                   n: int = TABLE_SIZE) -> tuple[np.ndarray, float]:
    """Sample f on [theta, 1] for the table kernels; ends forced to zero."""
    u = np.linspace(model.theta, 1.0, n + 1)
    tab = eval_f(u, model)
    tab[0] = 0.0
    tab[-1] = 0.0
    inv_du = n / (1.0 - model.theta)
    return tab, inv_du


@njit(cache=True, fastmath=True)
def _f_table(uc, theta, tab, inv_du):
    if uc <= theta or uc >= 1.0:
        return 0.0
    s = (uc - theta) * inv_du
    k = int(s)
    if k >= tab.shape[0] - 1:
        return 0.0
    w = s - k
    return (1.0 - w) * tab[k] + w * tab[k + 1]


# ----------------------------------------------------------------------
# periodic strip, anisotropic matrix
# ----------------------------------------------------------------------

@njit(cache=True, fastmath=True)
def strip_step_quad(u, w, adv, ix2, iy2, cxy, iyh, dt, theta, scale):
    nx, nyp1 = u.shape
    ny = nyp1 - 1
    half = 0.5 * dt
    for i in range(nx):
        im = i - 1 if i > 0 else nx - 1
        ip = i + 1 if i < nx - 1 else 0
        ai = adv[i] * iyh
        for j in range(1, ny):
            uc = u[i, j]
            lap = ((u[im, j] - 2.0 * uc + u[ip, j]) * ix2
                   + (u[i, j - 1] - 2.0 * uc + u[i, j + 1]) * iy2)
            mix = (u[ip, j + 1] - u[ip, j - 1]
                   - u[im, j + 1] + u[im, j - 1]) * cxy
            advt = ai * (u[i, j + 1] - u[i, j - 1])
            re = scale * max(uc - theta, 0.0) * max(1.0 - uc, 0.0)
            w[i, j] = uc + half * (lap + mix + advt + re)
    for i in range(nx):
        im = i - 1 if i > 0 else nx - 1
        ip = i + 1 if i < nx - 1 else 0
        ai = adv[i] * iyh
        for j in range(1, ny):
            wc = w[i, j]
            lap = ((w[im, j] - 2.0 * wc + w[ip, j]) * ix2
                   + (w[i, j - 1] - 2.0 * wc + w[i, j + 1]) * iy2)
            mix = (w[ip, j + 1] - w[ip, j - 1]
                   - w[im, j + 1] + w[im, j - 1]) * cxy
            advt = ai * (w[i, j + 1] - w[i, j - 1])
            re = scale * max(wc - theta, 0.0) * max(1.0 - wc, 0.0)
            u[i, j] = u[i, j] + dt * (lap + mix + advt + re)


@njit(cache=True, fastmath=True)
def strip_step_table(u, w, adv, ix2, iy2, cxy, iyh, dt, theta, tab, inv_du):
    nx, nyp1 = u.shape
    ny = nyp1 - 1
    half = 0.5 * dt
    for i in range(nx):
        im = i - 1 if i > 0 else nx - 1
        ip = i + 1 if i < nx - 1 else 0
        ai = adv[i] * iyh
        for j in range(1, ny):
            uc = u[i, j]
            lap = ((u[im, j] - 2.0 * uc + u[ip, j]) * ix2
                   + (u[i, j - 1] - 2.0 * uc + u[i, j + 1]) * iy2)
            mix = (u[ip, j + 1] - u[ip, j - 1]
                   - u[im, j + 1] + u[im, j - 1]) * cxy
            advt = ai * (u[i, j + 1] - u[i, j - 1])
            re = _f_table(uc, theta, tab, inv_du)
            w[i, j] = uc + half * (lap + mix + advt + re)
    for i in range(nx):
        im = i - 1 if i > 0 else nx - 1
        ip = i + 1 if i < nx - 1 else 0
        ai = adv[i] * iyh
        for j in range(1, ny):
            wc = w[i, j]
            lap = ((w[im, j] - 2.0 * wc + w[ip, j]) * ix2
                   + (w[i, j - 1] - 2.0 * wc + w[i, j + 1]) * iy2)
            mix = (w[ip, j + 1] - w[ip, j - 1]
                   - w[im, j + 1] + w[im, j - 1]) * cxy
            advt = ai * (w[i, j + 1] - w[i, j - 1])
            re = _f_table(wc, theta, tab, inv_du)
            u[i, j] = u[i, j] + dt * (lap + mix + advt + re)


# ----------------------------------------------------------------------
# plane, isotropic Laplacian, wing-following lateral ghosts
# ----------------------------------------------------------------------

@njit(cache=True, fastmath=True)
def plane_step_quad(u, w, adv, ix2, iy2, iyh, dt, theta, scale, gob):
    nxp1, nyp1 = u.shape
    nx = nxp1 - 1
    ny = nyp1 - 1
    half = 0.5 * dt
    obx = gob * ix2
    for i in range(nx + 1):
        im = i - 1 if i > 0 else 1
        ip = i + 1 if i < nx else nx - 1
        ob = obx if (i == 0 or i == nx) else 0.0
        ai = adv[i] * iyh
        for j in range(1, ny):
            uc = u[i, j]
            lap = ((u[im, j] - 2.0 * uc + u[ip, j]) * ix2
                   + (u[i, j - 1] - 2.0 * uc + u[i, j + 1]) * iy2
                   + ob * (u[i, j + 1] - u[i, j - 1]))
            advt = ai * (u[i, j + 1] - u[i, j - 1])
            re = scale * max(uc - theta, 0.0) * max(1.0 - uc, 0.0)
            w[i, j] = uc + half * (lap + advt + re)
    for i in range(nx + 1):
        im = i - 1 if i > 0 else 1
        ip = i + 1 if i < nx else nx - 1
        ob = obx if (i == 0 or i == nx) else 0.0
        ai = adv[i] * iyh
        for j in range(1, ny):
            wc = w[i, j]
            lap = ((w[im, j] - 2.0 * wc + w[ip, j]) * ix2
                   + (w[i, j - 1] - 2.0 * wc + w[i, j + 1]) * iy2
                   + ob * (w[i, j + 1] - w[i, j - 1]))
            advt = ai * (w[i, j + 1] - w[i, j - 1])
            re = scale * max(wc - theta, 0.0) * max(1.0 - wc, 0.0)
            u[i, j] = u[i, j] + dt * (lap + advt + re)


@njit(cache=True, fastmath=True)
def plane_step_table(u, w, adv, ix2, iy2, iyh, dt, theta, tab, inv_du, gob):
    nxp1, nyp1 = u.shape
    nx = nxp1 - 1
    ny = nyp1 - 1
    half = 0.5 * dt
    obx = gob * ix2
    for i in range(nx + 1):
        im = i - 1 if i > 0 else 1
        ip = i + 1 if i < nx else nx - 1
        ob = obx if (i == 0 or i == nx) else 0.0
        ai = adv[i] * iyh
        for j in range(1, ny):
            uc = u[i, j]
            lap = ((u[im, j] - 2.0 * uc + u[ip, j]) * ix2
                   + (u[i, j - 1] - 2.0 * uc + u[i, j + 1]) * iy2
                   + ob * (u[i, j + 1] - u[i, j - 1]))
            advt = ai * (u[i, j + 1] - u[i, j - 1])
            re = _f_table(uc, theta, tab, inv_du)
            w[i, j] = uc + half * (lap + advt + re)
    for i in range(nx + 1):
        im = i - 1 if i > 0 else 1
        ip = i + 1 if i < nx else nx - 1
        ob = obx if (i == 0 or i == nx) else 0.0
        ai = adv[i] * iyh
        for j in range(1, ny):
            wc = w[i, j]
            lap = ((w[im, j] - 2.0 * wc + w[ip, j]) * ix2
                   + (w[i, j - 1] - 2.0 * wc + w[i, j + 1]) * iy2
                   + ob * (w[i, j + 1] - w[i, j - 1]))
            advt = ai * (w[i, j + 1] - w[i, j - 1])
            re = _f_table(wc, theta, tab, inv_du)
            u[i, j] = u[i, j] + dt * (lap + advt + re)
