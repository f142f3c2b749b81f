"""Problem data for curved-front computations.

Everything downstream consumes four ingredients:

* an ignition ("combustion") nonlinearity f: zero on [0, theta] and at 1,
  positive on (theta, 1), zero outside [0, 1], Lipschitz, with f'(1) < 0;
* a mean-zero periodic shear flow q(x) advecting in the vertical direction;
* one of two constant anisotropic diffusion matrices built from a front
  half-angle alpha, ((1, m), (m, 1)) with m = +-cos(alpha);
* cone regions bounded by the graph y = l - |x| cot(alpha).

This module defines those objects, validated constructors for the standard
families, and small numerical checks (quadrature means, symmetry defects)
used by the configuration loader and the test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np

__all__ = [
    "CombustionNonlinearity",
    "ShearFlow",
    "DiffusionMatrix",
    "ConeRegion",
    "FlowValidation",
    "eval_f",
    "reaction_antiderivative",
    "quadratic_ignition",
    "zero_reaction",
    "tabulated_ignition",
    "cosine_flow",
    "zero_flow",
    "tabulated_flow",
    "validate_flow",
    "validate_nonlinearity",
    "diffusion_matrix",
    "cone_membership",
    "cone_mask",
]

TWO_PI = 2.0 * math.pi

#: Quadrature resolution for mean-value and antiderivative checks.  The
#: contract asks for composite trapezoid with at least 1024 panels.
QUADRATURE_POINTS = 2048

#: Tolerances for flow validation: closed-form profiles should satisfy the
#: identities to near round-off, tabulated ones only to interpolation error.
CLOSED_FORM_TOL = 1e-10
TABULATED_TOL = 1e-6


# ----------------------------------------------------------------------
# reaction term
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CombustionNonlinearity:
    """Ignition-type reaction term.

    ``evaluator`` is a vectorized callable giving f on the burning range
    (theta, 1); :func:`eval_f` extends it by zero everywhere else, which keeps
    every family exactly zero on [0, theta], at 1, and outside [0, 1].

    ``theta``
        ignition cutoff in (0, 1).
    ``r``
        radius of the interval left of 1 on which f is smooth and decreasing;
        only exercised by the f'(1) < 0 spot check.
    ``lipschitz_bound``
        a valid global Lipschitz constant for the zero-extended f.
    ``family`` / ``params``
        provenance tag for serialization ("quadratic", "zero", "tabulated",
        "custom") and the family parameters.
    """

    theta: float
    r: float
    evaluator: Callable[[np.ndarray], np.ndarray]
    lipschitz_bound: float
    family: str = "custom"
    params: tuple = ()

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError(f"ignition cutoff must lie in (0,1), got {self.theta}")
        if not 0.0 < self.r < 1.0 - self.theta:
            raise ValueError(
                f"smoothness radius r must lie in (0, 1-theta), got {self.r}"
            )
        if not (math.isfinite(self.lipschitz_bound) and self.lipschitz_bound >= 0.0):
            raise ValueError("lipschitz_bound must be finite and nonnegative")


def eval_f(u, model: CombustionNonlinearity):
    """Evaluate the zero-extended reaction term at scalar or array ``u``.

    Values outside the open burning interval (theta, 1) map to exactly 0.0;
    the evaluator is only ever called on points strictly inside.
    """
    arr = np.asarray(u, dtype=float)
    out = np.zeros_like(arr)
    mask = (arr > model.theta) & (arr < 1.0)
    if np.any(mask):
        vals = np.asarray(model.evaluator(arr[mask]), dtype=float)
        if not np.all(np.isfinite(vals)):
            raise ValueError("reaction evaluator produced non-finite values")
        out[mask] = vals
    if np.isscalar(u) or arr.ndim == 0:
        return float(out)
    return out


def reaction_antiderivative(v: float, model: CombustionNonlinearity,
                            points: int = QUADRATURE_POINTS) -> float:
    """F(v) = integral of f from theta to v by composite trapezoid.

    Used for energy bookkeeping of the one-dimensional profile equation and
    the concave extension; exact to O(points^-2).
    """
    if v <= model.theta:
        return 0.0
    hi = min(v, 1.0)
    xs = np.linspace(model.theta, hi, points + 1)
    return float(np.trapezoid(eval_f(xs, model), xs))


def quadratic_ignition(theta: float = 0.3, scale: float = 1.0,
                       r: float | None = None) -> CombustionNonlinearity:
    """Default family f(u) = scale * (u - theta)(1 - u) on (theta, 1).

    The extended function is globally Lipschitz with constant
    scale * (1 - theta) (the slope at the ignition cutoff).
    """
    if scale <= 0.0:
        raise ValueError("scale must be positive")
    if r is None:
        r = 0.5 * (1.0 - theta)
    th = float(theta)
    sc = float(scale)
    return CombustionNonlinearity(
        theta=th,
        r=float(r),
        evaluator=lambda u: sc * (u - th) * (1.0 - u),
        lipschitz_bound=sc * (1.0 - th),
        family="quadratic",
        params=(sc,),
    )


def zero_reaction(theta: float = 0.3) -> CombustionNonlinearity:
    """Degenerate f == 0 (pure advection-diffusion); keeps the same interface.

    Useful as a negative control: the front-speed problem loses its unique
    speed and bracketing must fail.
    """
    return CombustionNonlinearity(
        theta=float(theta),
        r=0.5 * (1.0 - float(theta)),
        evaluator=lambda u: np.zeros_like(np.asarray(u, dtype=float)),
        lipschitz_bound=0.0,
        family="zero",
        params=(),
    )


def tabulated_ignition(theta: float, u_nodes: Sequence[float],
                       f_nodes: Sequence[float],
                       r: float | None = None) -> CombustionNonlinearity:
    """Reaction term given by linear interpolation of samples on [theta, 1].

    End values are forced to zero so the zero extension stays continuous.
    """
    un = np.asarray(u_nodes, dtype=float)
    fn = np.asarray(f_nodes, dtype=float).copy()
    if un.ndim != 1 or un.shape != fn.shape or un.size < 3:
        raise ValueError("need matching 1-d node arrays with at least 3 samples")
    if np.any(np.diff(un) <= 0):
        raise ValueError("u_nodes must be strictly increasing")
    fn[0] = 0.0
    fn[-1] = 0.0
    lip = float(np.max(np.abs(np.diff(fn) / np.diff(un))))
    if r is None:
        r = 0.5 * (1.0 - float(theta))
    return CombustionNonlinearity(
        theta=float(theta),
        r=float(r),
        evaluator=lambda u: np.interp(u, un, fn),
        lipschitz_bound=lip,
        family="tabulated",
        params=(tuple(un.tolist()), tuple(fn.tolist())),
    )


@dataclass(frozen=True)
class NonlinearityValidation:
    """Measured defects of a reaction term against the ignition axioms."""

    zero_below_cutoff: float      # max |f| on [-0.5, theta]
    zero_above_one: float         # max |f| on [1, 1.5]
    min_on_burning_range: float   # min f on (theta, 1) interior mesh
    lipschitz_defect: float       # max measured slope minus declared bound
    slope_at_one: float           # one-sided difference quotient near u = 1
    passed: bool


def validate_nonlinearity(model: CombustionNonlinearity,
                          points: int = 4096) -> NonlinearityValidation:
    """Check the ignition axioms on a fine mesh over [-0.5, 1.5].

    Verifies f == 0 outside (theta, 1), positivity inside, the declared
    Lipschitz bound (to mesh resolution), and f'(1) < 0 via a one-sided
    difference at distance r/8.
    """
    lo = eval_f(np.linspace(-0.5, model.theta, points), model)
    hi = eval_f(np.linspace(1.0, 1.5, points), model)
    inner_u = np.linspace(model.theta, 1.0, points + 1)[1:-1]
    inner = eval_f(inner_u, model)
    full_u = np.linspace(-0.5, 1.5, 2 * points + 1)
    full = eval_f(full_u, model)
    slopes = np.abs(np.diff(full) / np.diff(full_u))
    du = model.r / 8.0
    slope_one = (eval_f(1.0, model) - eval_f(1.0 - du, model)) / du
    # Mesh slopes of a piecewise C^1 function can exceed the true sup-slope
    # only at kinks; allow a mesh-width cushion.
    cushion = 4.0 * model.lipschitz_bound / points + 1e-12
    ok = (
        float(np.max(np.abs(lo))) == 0.0
        and float(np.max(np.abs(hi))) == 0.0
        and (model.family == "zero" or float(np.min(inner)) > 0.0)
        and float(np.max(slopes)) <= model.lipschitz_bound + cushion
        and (model.family == "zero" or slope_one < 0.0)
    )
    return NonlinearityValidation(
        zero_below_cutoff=float(np.max(np.abs(lo))),
        zero_above_one=float(np.max(np.abs(hi))),
        min_on_burning_range=float(np.min(inner)),
        lipschitz_defect=float(np.max(slopes)) - model.lipschitz_bound,
        slope_at_one=float(slope_one),
        passed=bool(ok),
    )


# ----------------------------------------------------------------------
# shear flow
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ShearFlow:
    """Vertical shear q(x): L-periodic, mean zero, with |q| <= amplitude.

    ``profile`` is a vectorized callable; evenness q(x) = q(-x) is not an
    axiom but the speed-symmetry experiments rely on it, so
    :func:`validate_flow` reports the evenness defect alongside the axioms.
    """

    period_L: float
    profile: Callable[[np.ndarray], np.ndarray]
    amplitude: float
    family: str = "custom"
    params: tuple = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.period_L) and self.period_L > 0.0):
            raise ValueError(f"period must be positive, got {self.period_L}")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0.0):
            raise ValueError("amplitude must be finite and nonnegative")

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.profile(np.asarray(x, dtype=float)), dtype=float)


def cosine_flow(amplitude: float = 0.5, period: float = 1.0) -> ShearFlow:
    """q(x) = amplitude * cos(2 pi x / period): even, mean zero."""
    a = float(amplitude)
    L = float(period)
    return ShearFlow(
        period_L=L,
        profile=lambda x: a * np.cos(TWO_PI * np.asarray(x, dtype=float) / L),
        amplitude=abs(a),
        family="cosine",
        params=(a,),
    )


def zero_flow(period: float = 1.0) -> ShearFlow:
    """q == 0; the conical problem degenerates to the isotropic planar one."""
    return ShearFlow(
        period_L=float(period),
        profile=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        amplitude=0.0,
        family="zero",
        params=(),
    )


def tabulated_flow(x_nodes: Sequence[float], q_nodes: Sequence[float],
                   period: float) -> ShearFlow:
    """Flow by periodic linear interpolation of one period of samples.

    The samples are recentred so the trapezoid mean over one period is zero.
    """
    xn = np.asarray(x_nodes, dtype=float)
    qn = np.asarray(q_nodes, dtype=float).copy()
    L = float(period)
    if xn.ndim != 1 or xn.shape != qn.shape or xn.size < 3:
        raise ValueError("need matching 1-d node arrays with at least 3 samples")
    if np.any(np.diff(xn) <= 0) or xn[0] != 0.0 or xn[-1] > L:
        raise ValueError("x_nodes must increase from 0 within one period")
    # close the period for interpolation and mean removal
    xc = np.append(xn, L)
    qc = np.append(qn, qn[0])
    qc -= np.trapezoid(qc, xc) / L
    return ShearFlow(
        period_L=L,
        profile=lambda x: np.interp(np.mod(x, L), xc, qc),
        amplitude=float(np.max(np.abs(qc))),
        family="tabulated",
        params=(tuple(xc.tolist()), tuple(qc.tolist())),
    )


@dataclass(frozen=True)
class FlowValidation:
    """Measured defects of a shear profile: all should be ~0 for valid flows."""

    mean_defect: float        # |trapezoid mean over one period|
    periodicity_defect: float  # max |q(x+L) - q(x)|
    evenness_defect: float    # max |q(x) - q(-x)|
    amplitude_defect: float   # max(|q| - amplitude, 0)
    tolerance: float
    passed: bool              # axioms only; evenness reported, not required


def validate_flow(flow: ShearFlow, points: int = QUADRATURE_POINTS) -> FlowValidation:
    """Quadrature/sampling check of periodicity, zero mean, and amplitude.

    Raises ValueError on non-finite samples.  Closed-form families are held
    to 1e-10, tabulated ones to 1e-6 (interpolation error scale).
    """
    L = flow.period_L
    xs = np.linspace(0.0, L, points + 1)
    q = flow(xs)
    if not np.all(np.isfinite(q)):
        raise ValueError("flow profile produced non-finite values")
    mean = abs(float(np.trapezoid(q, xs)) / L)
    per = float(np.max(np.abs(flow(xs + L) - q)))
    even = float(np.max(np.abs(flow(-xs) - q)))
    amp = max(float(np.max(np.abs(q))) - flow.amplitude, 0.0)
    tol = TABULATED_TOL if flow.family == "tabulated" else CLOSED_FORM_TOL
    passed = mean <= tol and per <= tol and amp <= tol
    return FlowValidation(
        mean_defect=mean,
        periodicity_defect=per,
        evenness_defect=even,
        amplitude_defect=amp,
        tolerance=tol,
        passed=bool(passed),
    )


# ----------------------------------------------------------------------
# diffusion matrices
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DiffusionMatrix:
    """Constant SPD matrix ((1, m), (m, 1)) with m = cos(alpha) ("A" variant)
    or m = -cos(alpha) ("B" variant); eigenvalues 1 +- |m| > 0 for
    alpha in (0, pi).

    The two variants are X-reflections of each other; for even shear flows
    their strip problems share one speed.
    """

    alpha: float
    variant: Literal["A", "B"]
    entries: tuple[tuple[float, float], tuple[float, float]]

    @property
    def mixed(self) -> float:
        """Off-diagonal entry m."""
        return self.entries[0][1]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def eigenvalues(self) -> tuple[float, float]:
        m = abs(self.mixed)
        return (1.0 - m, 1.0 + m)


def diffusion_matrix(alpha: float, variant: str) -> DiffusionMatrix:
    """Build the A/B matrix for half-angle alpha in (0, pi).

    Raises ValueError outside the open interval (the matrix degenerates at
    the endpoints) or for an unknown variant tag.
    """
    if not (math.isfinite(alpha) and 0.0 < alpha < math.pi):
        raise ValueError(f"half-angle must lie in (0, pi), got {alpha}")
    if variant not in ("A", "B"):
        raise ValueError(f"variant must be 'A' or 'B', got {variant!r}")
    m = math.cos(alpha) if variant == "A" else -math.cos(alpha)
    return DiffusionMatrix(
        alpha=float(alpha),
        variant=variant,  # type: ignore[arg-type]
        entries=((1.0, m), (m, 1.0)),
    )


# ----------------------------------------------------------------------
# cone geometry
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ConeRegion:
    """Cone with apex (0, level_l) bounded by y = level_l - |x| cot(alpha).

    side="lower": the closed set below the tent (interior direction -y);
    side="upper": the closed set above it.  The two sides overlap exactly on
    the boundary graph, so open-interior membership partitions the plane.
    """

    alpha: float
    level_l: float
    side: Literal["lower", "upper"]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and 0.0 < self.alpha < math.pi):
            raise ValueError(f"half-angle must lie in (0, pi), got {self.alpha}")
        if self.side not in ("lower", "upper"):
            raise ValueError(f"side must be 'lower' or 'upper', got {self.side!r}")

    def boundary_y(self, x) -> np.ndarray:
        """Height of the cone boundary above abscissa x."""
        cot = math.cos(self.alpha) / math.sin(self.alpha)
        return self.level_l - np.abs(np.asarray(x, dtype=float)) * cot


def cone_membership(point: tuple[float, float], region: ConeRegion) -> bool:
    """Closed-set membership of a single (x, y) point."""
    x, y = float(point[0]), float(point[1])
    edge = float(region.boundary_y(x))
    return y <= edge if region.side == "lower" else y >= edge


def cone_mask(x, y, region: ConeRegion, *, strict: bool = False) -> np.ndarray:
    """Vectorized membership: boolean mask over broadcastable x, y arrays.

    ``strict`` selects the open interior (used to test that the two sides
    partition the plane up to the boundary graph).
    """
    edge = region.boundary_y(x)
    yy = np.asarray(y, dtype=float)
    if region.side == "lower":
        return yy < edge if strict else yy <= edge
    return yy > edge if strict else yy >= edge
