"""Explicit sub/supersolution barriers for conical fronts.

Given the two normalized strip fronts phi (variant A) and psi (variant B) at
half-angle alpha, the plane components are their rotations

    phi1(x, y) = phi(x mod L, x cos(alpha) + y sin(alpha)),
    phi2(x, y) = psi(x mod L, -x cos(alpha) + y sin(alpha)),

the subsolution is max(phi1, phi2), and the supersolution is H(phi1 + phi2)
where H is a concave superposition profile: H(z) = 2z up to theta/2, then the
solution h of

    beta * h'' + f(h) = 0,    h(theta/2) = theta,   h'(theta/2) = 2,

continued to z = 2.  Multiplying by h' integrates this exactly:

    beta * h'(z)^2 / 2 + F(h(z)) = 2 * beta,      F(v) = int_theta^v f,

so the integrator is cross-checked against an energy identity, and the
admissible-slope threshold is explicit: h' keeps its sign up to h = 1 iff
beta > F(1)/2, and below that h turns around at F^{-1}(2 beta).

Band constants measured from the fronts (sup/inf crossing levels M0..M4 and
the derivative floors mu, mu0) prescribe the largest admissible beta,
min(4 mu^2, mu0^2) sin^2(alpha).  The certification op evaluates the discrete
elliptic residual of the assembled barriers case by case over the regions

    C:      both rotated coordinates below their M1/M2 levels,
    H:      both above M3/M4,
    Z:      everything else,

against a discretization floor eps_disc calibrated on an exactly-solvable
rotated planar front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Literal, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator, RegularGridInterpolator

from .model import CombustionNonlinearity, ShearFlow, eval_f, zero_flow
from .planar import PlanarProfile
from .strip import FrontProfile

__all__ = [
    "PlaneGrid",
    "HProfile",
    "BandConstants",
    "Components",
    "BarrierPair",
    "CaseReport",
    "SupersolutionCertificate",
    "SubsolutionCertificate",
    "integrate_h",
    "extend_H",
    "measure_band_constants",
    "choose_beta",
    "build_components",
    "build_subsolution",
    "build_supersolution",
    "classify_region",
    "classify_region_grid",
    "residual",
    "calibrate_residual_floor",
    "certify_supersolution_cases",
    "certify_subsolution_margin",
    "rotated_coordinates",
]


# ----------------------------------------------------------------------
# plane grid
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneGrid:
    """Uniform node grid on [-x_max, x_max] x [-y_max, y_max].

    ``nx``/``ny`` count cells; fields are stored on the (nx+1) x (ny+1)
    nodes, index [i, j] at (x_i, y_j).
    """

    x_max: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.x_max <= 0 or self.y_max <= 0:
            raise ValueError("extents must be positive")
        if self.nx < 16 or self.ny < 16:
            raise ValueError("need at least 16 cells per direction")

    @property
    def dx(self) -> float:
        return 2.0 * self.x_max / self.nx

    @property
    def dy(self) -> float:
        return 2.0 * self.y_max / self.ny

    def x_nodes(self) -> np.ndarray:
        return -self.x_max + np.arange(self.nx + 1) * self.dx

    def y_nodes(self) -> np.ndarray:
        return -self.y_max + np.arange(self.ny + 1) * self.dy

    def check_cone_fit(self, alpha: float) -> None:
        """Cone boundaries through the origin must exit the lateral sides."""
        cot = abs(math.cos(alpha) / math.sin(alpha))
        if self.x_max * cot >= self.y_max:
            raise ValueError(
                f"x_max*|cot(alpha)| = {self.x_max * cot:.3f} must be < y_max "
                f"= {self.y_max:.3f}; enlarge y_max or shrink x_max")


def rotated_coordinates(grid: PlaneGrid, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Strip ordinates (x cos a + y sin a, -x cos a + y sin a) on the nodes."""
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    ca, sa = math.cos(alpha), math.sin(alpha)
    return x * ca + y * sa, -x * ca + y * sa


# ----------------------------------------------------------------------
# superposition profile H
# ----------------------------------------------------------------------

@dataclass
class HProfile:
    """Concave superposition profile on [0, 2].

    ``h_*`` sample the ODE branch on ``z_h`` (from theta/2 to 2); ``H_values``
    (filled by :func:`extend_H`) extend by the exact linear piece 2z below the
    junction, which matches value theta and slope 2 there, so H is C^1 with
    H''(theta/2+) = -f(theta)/beta = 0: a C^2 junction.

    ``increasing``/``value_at_one``/``value_at_two``/``turning_value`` record
    the measured shape, and ``energy_residual`` the worst defect of the exact
    first integral beta h'^2/2 + F(h) = 2 beta (an independent correctness
    check on the integration).
    """

    beta: float
    theta: float
    z_nodes: np.ndarray
    z_h: np.ndarray
    h_values: np.ndarray
    h_derivative: np.ndarray
    H_values: Optional[np.ndarray]
    increasing: bool
    value_at_one: float
    value_at_two: float
    turning_value: Optional[float]
    energy_residual: float
    junction_jump: float
    _model: CombustionNonlinearity

    def h_at(self, z) -> np.ndarray:
        zz = np.asarray(z, dtype=float)
        if np.any(zz < self.theta / 2 - 1e-12) or np.any(zz > 2.0 + 1e-12):
            raise ValueError("h is defined on [theta/2, 2]")
        out = self._h_interp(np.clip(zz, self.z_h[0], self.z_h[-1]))
        return out if out.ndim else float(out)

    def H_at(self, z) -> np.ndarray:
        zz = np.asarray(z, dtype=float)
        if np.any(zz < -1e-12) or np.any(zz > 2.0 + 1e-12):
            raise ValueError("H is defined on [0, 2]")
        zz = np.clip(zz, 0.0, 2.0)
        lin = 2.0 * zz
        curved = self._h_interp(np.clip(zz, self.z_h[0], self.z_h[-1]))
        out = np.where(zz <= self.theta / 2, lin, curved)
        return out if out.ndim else float(out)

    def H_slope_at(self, z) -> np.ndarray:
        zz = np.clip(np.asarray(z, dtype=float), 0.0, 2.0)
        curved = self._hp_interp(np.clip(zz, self.z_h[0], self.z_h[-1]))
        out = np.where(zz <= self.theta / 2, 2.0, curved)
        return out if out.ndim else float(out)

    def H_curvature_at(self, z) -> np.ndarray:
        """H'' from the ODE itself: -f(H)/beta above the junction, 0 below."""
        zz = np.clip(np.asarray(z, dtype=float), 0.0, 2.0)
        vals = self.H_at(zz)
        curv = -eval_f(vals, self._model) / self.beta
        out = np.where(zz <= self.theta / 2, 0.0, curv)
        return out if out.ndim else float(out)

    @property
    def _h_interp(self):
        cache = self.__dict__.get("_h_cache")
        if cache is None:
            cache = PchipInterpolator(self.z_h, self.h_values)
            self.__dict__["_h_cache"] = cache
        return cache

    @property
    def _hp_interp(self):
        cache = self.__dict__.get("_hp_cache")
        if cache is None:
            cache = PchipInterpolator(self.z_h, self.h_derivative)
            self.__dict__["_hp_cache"] = cache
        return cache


def _antiderivative_interp(model: CombustionNonlinearity, n: int = 8192):
    """F(v) = int_theta^v f as a fast interpolant (constant outside [theta,1])."""
    u = np.linspace(model.theta, 1.0, n + 1)
    f = eval_f(u, model)
    F = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(u) * (f[:-1] + f[1:]))])

    def F_at(v):
        return np.interp(np.clip(v, model.theta, 1.0), u, F)

    return F_at, float(F[-1])


def integrate_h(beta: float, theta: float, model: CombustionNonlinearity, *,
                rtol: float = 1e-10, atol: float = 1e-9,
                nodes: int = 4096) -> HProfile:
    """Integrate beta h'' + f(h) = 0 from (theta/2: h=theta, h'=2) to z=2.

    The measured shape flags are recorded, not enforced: whether h stays
    increasing and exceeds 1 is decided by beta against the threshold
    F(1)/2 (see the energy identity in the module docstring).
    """
    if beta <= 0 or not math.isfinite(beta):
        raise ValueError("beta must be positive and finite")
    if abs(theta - model.theta) > 1e-12:
        raise ValueError("theta must match the reaction model")
    z0 = theta / 2.0
    z_h = np.linspace(z0, 2.0, nodes + 1)
    n_lo = max(8, int(round(nodes * z0 / (2.0 - z0))))
    z_lo = np.linspace(0.0, z0, n_lo + 1)[:-1]
    z_nodes = np.concatenate([z_lo, z_h])

    def rhs(_z, s):
        return (s[1], -eval_f(float(s[0]), model) / beta)

    sol = solve_ivp(rhs, (z0, 2.0), (theta, 2.0), method="RK45",
                    t_eval=z_h, rtol=rtol, atol=atol, max_step=0.01)
    if not sol.success or not np.all(np.isfinite(sol.y)):
        raise RuntimeError(f"profile integration failed: {sol.message}")
    h = sol.y[0]
    hp = sol.y[1]

    F_at, _F1 = _antiderivative_interp(model)
    energy = beta * hp ** 2 / 2.0 + F_at(h) - 2.0 * beta
    turning = None
    nonpos = np.nonzero(hp <= 0.0)[0]
    if nonpos.size:
        turning = float(h[max(nonpos[0] - 1, 0)])

    return HProfile(
        beta=float(beta),
        theta=float(theta),
        z_nodes=z_nodes,
        z_h=z_h,
        h_values=h,
        h_derivative=hp,
        H_values=None,
        increasing=bool(np.all(np.diff(h) > 0.0)),
        value_at_one=float(np.interp(1.0, z_h, h)),
        value_at_two=float(h[-1]),
        turning_value=turning,
        energy_residual=float(np.max(np.abs(energy))),
        junction_jump=abs(-eval_f(theta, model) / beta),
        _model=model,
    )


def extend_H(profile: HProfile) -> HProfile:
    """Fill H on the full [0, 2] mesh: 2z below the junction, h above."""
    z = profile.z_nodes
    H = np.where(z < profile.theta / 2.0, 2.0 * z,
                 np.interp(z, profile.z_h, profile.h_values))
    return replace(profile, H_values=H)


# ----------------------------------------------------------------------
# band constants
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BandConstants:
    """Crossing levels and derivative floors of the normalized strip fronts.

    M0/M1: largest Y where sup_X phi stays <= theta/4 and theta/2;
    M3: smallest Y where inf_X phi >= 1/2; M0'/M2/M4: the same for psi.
    mu: min of the Y-derivatives over the mid bands [M1,M3] / [M2,M4];
    mu0: the same over the tail bands [M0,M1] / [M0',M2].
    beta: admissible curvature budget, NaN until chosen.
    """

    M0: float
    M0_prime: float
    M1: float
    M2: float
    M3: float
    M4: float
    mu: float
    mu0: float
    beta: float = float("nan")


def _level_from_below(env: np.ndarray, y: np.ndarray, level: float,
                      what: str) -> float:
    """Largest Y with env <= level, by linear interpolation of the crossing."""
    env = np.maximum.accumulate(env)     # enforce the monotone envelope
    idx = int(np.searchsorted(env, level, side="right"))
    if idx == 0:
        raise ValueError(f"band for {what} is empty: the whole column exceeds "
                         f"{level}; y_max is too small")
    if idx > len(env) - 1:
        raise ValueError(f"band for {what} is empty: the column never exceeds "
                         f"{level}; y_max is too small")
    y0, y1 = y[idx - 1], y[idx]
    v0, v1 = env[idx - 1], env[idx]
    if v1 <= v0:
        return float(y0)
    return float(y0 + (level - v0) / (v1 - v0) * (y1 - y0))


def _band_min_slope(profile: FrontProfile, lo: float, hi: float) -> float:
    """Min centered Y-derivative over rows straddling the band [lo, hi]."""
    g = profile.grid
    y = g.y_nodes()
    rows = np.nonzero((y >= lo - g.dy) & (y <= hi + g.dy))[0]
    rows = rows[(rows >= 1) & (rows <= g.ny - 1)]
    if rows.size == 0:
        raise ValueError("derivative band contains no interior rows")
    u = profile.values
    slopes = (u[:, rows + 1] - u[:, rows - 1]) / (2.0 * g.dy)
    return float(np.min(slopes))


def measure_band_constants(phi: FrontProfile, psi: FrontProfile,
                           theta: float, alpha: float) -> BandConstants:
    """Measure M0..M4 and the derivative floors from the normalized fronts."""
    if not (phi.normalized and psi.normalized):
        raise ValueError("both fronts must be normalized before measuring bands")
    y_phi = phi.grid.y_nodes()
    y_psi = psi.grid.y_nodes()
    sup_phi = phi.values.max(axis=0)
    inf_phi = phi.values.min(axis=0)
    sup_psi = psi.values.max(axis=0)
    inf_psi = psi.values.min(axis=0)

    M0 = _level_from_below(sup_phi, y_phi, theta / 4.0, "M0")
    M1 = _level_from_below(sup_phi, y_phi, theta / 2.0, "M1")
    M0p = _level_from_below(sup_psi, y_psi, theta / 4.0, "M0'")
    M2 = _level_from_below(sup_psi, y_psi, theta / 2.0, "M2")
    M3 = _level_from_below(inf_phi, y_phi, 0.5, "M3")
    M4 = _level_from_below(inf_psi, y_psi, 0.5, "M4")

    if not (M0 < M1 < 0.0):
        raise ValueError(f"expected M0 < M1 < 0, got M0={M0:.4f}, M1={M1:.4f}; "
                         "are the fronts normalized at the ignition cutoff?")
    if not (M3 > 0.0):
        raise ValueError(f"expected M3 > 0, got {M3:.4f}")

    mu = min(_band_min_slope(phi, M1, M3), _band_min_slope(psi, M2, M4))
    mu0 = min(_band_min_slope(phi, M0, M1), _band_min_slope(psi, M0p, M2))
    if mu <= 0.0 or mu0 <= 0.0:
        raise ValueError(f"derivative floors must be positive, got mu={mu:.3e}, "
                         f"mu0={mu0:.3e}")
    return BandConstants(M0=M0, M0_prime=M0p, M1=M1, M2=M2, M3=M3, M4=M4,
                         mu=mu, mu0=mu0)


def choose_beta(constants: BandConstants, alpha: float) -> float:
    """Largest admissible curvature budget min(4 mu^2, mu0^2) sin^2(alpha)."""
    s2 = math.sin(alpha) ** 2
    return min(4.0 * constants.mu ** 2, constants.mu0 ** 2) * s2


# ----------------------------------------------------------------------
# components and barriers
# ----------------------------------------------------------------------

@dataclass
class Components:
    """The two rotated strip fronts sampled on a plane grid."""

    phi1: np.ndarray
    phi2: np.ndarray
    slope1: np.ndarray           # d/dY phi at the rotated coordinates
    slope2: np.ndarray
    grid: PlaneGrid
    alpha: float
    mode: str


def build_components(phi: FrontProfile, psi: FrontProfile, alpha: float,
                     grid: PlaneGrid,
                     mode: Literal["spline", "bilinear"] = "spline") -> Components:
    """Sample phi1, phi2 (and their strip-Y slopes) on the plane nodes.

    Raises ValueError when a rotated ordinate exits the strip: the strips
    must be solved with y_max >= x_max |cos a| + y_max_plane sin a.
    """
    if not (phi.normalized and psi.normalized):
        raise ValueError("components require normalized fronts")
    grid.check_cone_fit(alpha)
    Y1, Y2 = rotated_coordinates(grid, alpha)
    for Y, pr, tag in ((Y1, phi, "phi1"), (Y2, psi, "phi2")):
        ylo, yhi = pr.grid.y_nodes()[0], pr.grid.y_nodes()[-1]
        if Y.min() < ylo - 1e-12 or Y.max() > yhi + 1e-12:
            raise ValueError(
                f"rotated ordinate for {tag} spans [{Y.min():.2f}, {Y.max():.2f}] "
                f"but the strip only covers [{ylo:.2f}, {yhi:.2f}]; "
                "solve the strips with a larger y_max")

    x = grid.x_nodes()[:, None]
    X1 = np.broadcast_to(np.mod(x, phi.grid.period_length), Y1.shape)
    X2 = np.broadcast_to(np.mod(x, psi.grid.period_length), Y2.shape)

    if mode == "spline":
        phi1 = phi._spline().ev(X1.ravel(), Y1.ravel()).reshape(Y1.shape)
        phi2 = psi._spline().ev(X2.ravel(), Y2.ravel()).reshape(Y2.shape)
        s1 = phi._spline().ev(X1.ravel(), Y1.ravel(), dy=1).reshape(Y1.shape)
        s2 = psi._spline().ev(X2.ravel(), Y2.ravel(), dy=1).reshape(Y2.shape)
    elif mode == "bilinear":
        phi1 = _bilinear(phi, X1, Y1)
        phi2 = _bilinear(psi, X2, Y2)
        dy = 1e-6
        s1 = (_bilinear(phi, X1, Y1 + dy) - _bilinear(phi, X1, Y1 - dy)) / (2 * dy)
        s2 = (_bilinear(psi, X2, Y2 + dy) - _bilinear(psi, X2, Y2 - dy)) / (2 * dy)
    else:
        raise ValueError(f"unknown interpolation mode {mode!r}")

    return Components(phi1=np.clip(phi1, 0.0, 1.0), phi2=np.clip(phi2, 0.0, 1.0),
                      slope1=s1, slope2=s2, grid=grid, alpha=alpha, mode=mode)


def _bilinear(profile: FrontProfile, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    g = profile.grid
    pad = 1
    xs = np.concatenate([g.x_nodes(), [g.period_length]])
    v = np.concatenate([profile.values, profile.values[:pad]], axis=0)
    interp = RegularGridInterpolator((xs, g.y_nodes()), v, method="linear",
                                     bounds_error=True)
    pts = np.stack([X.ravel(), Y.ravel()], axis=-1)
    return interp(pts).reshape(X.shape)


def build_subsolution(phi1: np.ndarray, phi2: np.ndarray) -> np.ndarray:
    """Lower barrier: pointwise max of the two components."""
    return np.maximum(phi1, phi2)


def build_supersolution(h_profile: Optional[HProfile], phi1: np.ndarray,
                        phi2: np.ndarray) -> np.ndarray:
    """Upper barrier H(phi1 + phi2); ``h_profile=None`` is the identity debug
    mode (returns the raw sum).

    Raises ValueError if the sum overshoots [0, 2] by more than 1e-8 (the
    components are fronts in [0, 1], so a larger overshoot means broken
    inputs rather than round-off).
    """
    s = phi1 + phi2
    over = max(float(s.max()) - 2.0, -float(s.min()), 0.0)
    if over > 1e-8:
        raise ValueError(f"component sum leaves [0, 2] by {over:.3e}")
    s = np.clip(s, 0.0, 2.0)
    if h_profile is None:
        return s
    return np.asarray(h_profile.H_at(s))


@dataclass
class BarrierPair:
    """Assembled barriers with their provenance."""

    sub: np.ndarray
    super: np.ndarray
    constants: BandConstants
    components: Components
    h_profile: Optional[HProfile] = None

    def ordering_violation(self) -> float:
        """max(sub - super); <= 0 when the pair is ordered."""
        return float(np.max(self.sub - self.super))


# ----------------------------------------------------------------------
# regions and residuals
# ----------------------------------------------------------------------

REGION_CODES = {0: "C", 1: "Z", 2: "H"}


def classify_region_grid(grid: PlaneGrid, constants: BandConstants,
                         alpha: float) -> np.ndarray:
    """Region code per node: 0 = C (both tails), 2 = H (both burnt), 1 = Z."""
    Y1, Y2 = rotated_coordinates(grid, alpha)
    out = np.ones(Y1.shape, dtype=np.int8)
    out[(Y1 <= constants.M1) & (Y2 <= constants.M2)] = 0
    out[(Y1 >= constants.M3) & (Y2 >= constants.M4)] = 2
    return out


def classify_region(point: tuple[float, float], constants: BandConstants,
                    alpha: float) -> str:
    """Region label of a single (x, y) point: "C", "Z", or "H"."""
    x, y = float(point[0]), float(point[1])
    ca, sa = math.cos(alpha), math.sin(alpha)
    Y1 = x * ca + y * sa
    Y2 = -x * ca + y * sa
    if Y1 <= constants.M1 and Y2 <= constants.M2:
        return "C"
    if Y1 >= constants.M3 and Y2 >= constants.M4:
        return "H"
    return "Z"


def residual(field: np.ndarray, c: float, flow: ShearFlow,
             model: CombustionNonlinearity, grid: PlaneGrid) -> np.ndarray:
    """Discrete residual Delta u + (q(x) - c) u_y + f(u) on interior nodes.

    Second-order centered differences; the boundary ring is NaN so callers
    can mask it out with nan-aware reductions.
    """
    u = np.asarray(field, dtype=float)
    if u.shape != (grid.nx + 1, grid.ny + 1):
        raise ValueError(f"field shape {u.shape} does not match grid nodes "
                         f"{(grid.nx + 1, grid.ny + 1)}")
    ix2 = 1.0 / grid.dx ** 2
    iy2 = 1.0 / grid.dy ** 2
    iyh = 1.0 / (2.0 * grid.dy)
    out = np.full_like(u, np.nan)
    core = u[1:-1, 1:-1]
    lap = ((u[:-2, 1:-1] - 2.0 * core + u[2:, 1:-1]) * ix2
           + (u[1:-1, :-2] - 2.0 * core + u[1:-1, 2:]) * iy2)
    adv = ((flow(grid.x_nodes()[1:-1]) - c)[:, None]
           * (u[1:-1, 2:] - u[1:-1, :-2]) * iyh)
    out[1:-1, 1:-1] = lap + adv + eval_f(core, model)
    return out


def calibrate_residual_floor(planar: PlanarProfile, alpha: float,
                             grid: PlaneGrid, model: CombustionNonlinearity,
                             factor: float = 5.0) -> float:
    """Discretization floor eps_disc from an exactly-solvable field.

    The planar front tilted to half-angle alpha, u(x, y) = U(x cos a + y sin a),
    solves the continuum moving-frame equation with q = 0 and c = c0/sin(a)
    identically, so any discrete residual it shows on this grid is pure
    discretization error; eps_disc is ``factor`` times its max.
    """
    ca, sa = math.cos(alpha), math.sin(alpha)
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    field = planar.sample(x * ca + y * sa)
    res = residual(field, planar.c0 / sa, zero_flow(1.0), model, grid)
    return factor * float(np.nanmax(np.abs(res)))


# ----------------------------------------------------------------------
# certification
# ----------------------------------------------------------------------

@dataclass
class CaseReport:
    """Residual statistics of one certification case."""

    name: str
    nodes: int
    max_residual: float
    violations: int
    worst_point: Optional[tuple[float, float]]


@dataclass
class SupersolutionCertificate:
    """Case-by-case residual audit of the upper barrier.

    A valid supersolution has residual <= +eps_disc everywhere, so ``passed``
    requires zero violations in all cases.  The sampled hypotheses record the
    structural facts each case's argument rests on.
    """

    cases: list[CaseReport]
    eps_disc: float
    passed: bool
    reaction_active_in_H: int      # nodes in H with f(H(s)) != 0 (want 0)
    min_H_in_H_region: float
    max_sum_in_C: float            # max phi1+phi2 over eroded C (want <= theta)
    min_band_slope_in_Z: float     # min of both slopes over Z (want >= mu-ish)
    pointwise_slope_criterion: float
    # min over nodes where f(H(s)) > 0 of sin^2(a) (d_Y phi1 + d_Y phi2)^2 - beta:
    # nonnegative iff the curvature budget beta is actually available pointwise.


@dataclass
class SubsolutionCertificate:
    """Residual audit of the lower barrier away from the crossing set."""

    nodes: int
    max_deficit: float             # max(-residual) over the audited nodes
    violations: int
    margin: float
    eps_disc: float
    passed: bool
    worst_point: Optional[tuple[float, float]]


def _worst(res: np.ndarray, mask: np.ndarray, grid: PlaneGrid,
           sign: float = 1.0) -> tuple[float, Optional[tuple[float, float]]]:
    vals = np.where(mask, sign * res, -np.inf)
    if not np.any(mask):
        return float("-inf"), None
    flat = int(np.argmax(vals))
    i, j = np.unravel_index(flat, res.shape)
    return float(vals[i, j]), (float(grid.x_nodes()[i]), float(grid.y_nodes()[j]))


def certify_supersolution_cases(
    super_field: np.ndarray,
    components: Components,
    constants: BandConstants,
    h_profile: HProfile,
    *,
    c: float,
    flow: ShearFlow,
    model: CombustionNonlinearity,
    eps_disc: float,
) -> SupersolutionCertificate:
    """Audit the discrete residual of H(phi1+phi2) case by case.

    Cases: region C split at H <= theta vs H > theta (reaction off/on in the
    unburnt corner), the intermediate band Z, and the burnt region H, where
    f(H) should vanish identically because H >= h(1) > 1 there (recorded, and
    false when the curvature budget breaks the profile).
    """
    grid = components.grid
    alpha = components.alpha
    res = residual(super_field, c, flow, model, grid)
    region = classify_region_grid(grid, constants, alpha)
    interior = ~np.isnan(res)

    s = np.clip(components.phi1 + components.phi2, 0.0, 2.0)
    Hs = np.asarray(h_profile.H_at(s))

    masks = {
        "1a: C, H(sum) <= theta": (region == 0) & (Hs <= model.theta) & interior,
        "1b: C, H(sum) > theta": (region == 0) & (Hs > model.theta) & interior,
        "2: intermediate band Z": (region == 1) & interior,
        "3: burnt region H": (region == 2) & interior,
    }
    cases = []
    total_viol = 0
    for name, mask in masks.items():
        if np.any(mask):
            worst, where = _worst(res, mask, grid)
            viol = int(np.sum(res[mask] > eps_disc))
        else:
            worst, where = float("-inf"), None
            viol = 0
        total_viol += viol
        cases.append(CaseReport(name=name, nodes=int(np.sum(mask)),
                                max_residual=worst, violations=viol,
                                worst_point=where))

    h_mask = (region == 2) & interior
    reaction_H = int(np.sum(eval_f(Hs[h_mask], model) > 0.0)) if np.any(h_mask) else 0
    min_H = float(np.min(Hs[h_mask])) if np.any(h_mask) else float("inf")

    c_mask = (region == 0)
    eroded = c_mask.copy()
    eroded[1:, :] &= c_mask[:-1, :]
    eroded[:-1, :] &= c_mask[1:, :]
    eroded[:, 1:] &= c_mask[:, :-1]
    eroded[:, :-1] &= c_mask[:, 1:]
    max_sum_C = float(np.max(s[eroded])) if np.any(eroded) else float("-inf")

    z_mask = (region == 1) & interior
    if np.any(z_mask):
        min_slope_Z = float(min(np.min(components.slope1[z_mask]),
                                np.min(components.slope2[z_mask])))
    else:
        min_slope_Z = float("inf")

    active = (eval_f(Hs, model) > 0.0) & interior
    if np.any(active):
        sa2 = math.sin(alpha) ** 2
        budget = sa2 * (components.slope1[active] + components.slope2[active]) ** 2
        pointwise = float(np.min(budget) - h_profile.beta)
    else:
        pointwise = float("inf")

    return SupersolutionCertificate(
        cases=cases,
        eps_disc=eps_disc,
        passed=(total_viol == 0),
        reaction_active_in_H=reaction_H,
        min_H_in_H_region=min_H,
        max_sum_in_C=max_sum_C,
        min_band_slope_in_Z=min_slope_Z,
        pointwise_slope_criterion=pointwise,
    )


def certify_subsolution_margin(
    sub_field: np.ndarray,
    components: Components,
    *,
    c: float,
    flow: ShearFlow,
    model: CombustionNonlinearity,
    eps_disc: float,
    margin: float = 0.05,
) -> SubsolutionCertificate:
    """Audit max(phi1, phi2): residual >= -eps_disc wherever one component
    clearly dominates (|phi1 - phi2| > margin), i.e. away from the crossing
    set where the max has a kink and the discrete residual is meaningless.
    """
    grid = components.grid
    res = residual(sub_field, c, flow, model, grid)
    interior = ~np.isnan(res)
    mask = (np.abs(components.phi1 - components.phi2) > margin) & interior
    if not np.any(mask):
        raise ValueError("margin mask is empty; margin too large?")
    worst, where = _worst(res, mask, grid, sign=-1.0)
    violations = int(np.sum(res[mask] < -eps_disc))
    return SubsolutionCertificate(
        nodes=int(np.sum(mask)),
        max_deficit=worst,
        violations=violations,
        margin=margin,
        eps_disc=eps_disc,
        passed=(violations == 0),
        worst_point=where,
    )
