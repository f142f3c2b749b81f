"""Qualitative checks on computed fronts: monotonicity, conical limits,
ordering against barriers, cone-restricted comparison, and uniqueness of the
shape up to vertical shifts.

Each check returns a :class:`VerificationReport` carrying the worst measured
violation and where it happened, so failures are actionable.  The comparison
check validates its own hypotheses (boundary ordering on the cone edge plus
an interior bound) before evaluating the conclusion, and names the failed
hypothesis when one breaks — mirroring how the analytical argument is
structured, but as measurements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .barriers import PlaneGrid
from .model import ConeRegion, cone_mask

__all__ = [
    "VerificationReport",
    "check_monotone_y",
    "check_cone_limits",
    "check_ordering",
    "check_comparison_on_cone",
    "check_shift_uniqueness",
]


@dataclass
class VerificationReport:
    """Outcome of one check; ``worst_violation <= tolerance`` iff ``passed``."""

    check_name: str
    passed: bool
    worst_violation: float
    worst_location: Optional[tuple[float, float]]
    tolerance: float
    metadata: dict = dc_field(default_factory=dict)


def _locate(grid: PlaneGrid, flat_index: int, shape) -> tuple[float, float]:
    i, j = np.unravel_index(flat_index, shape)
    return (float(grid.x_nodes()[i]), float(grid.y_nodes()[j]))


def check_monotone_y(field: np.ndarray, grid: PlaneGrid,
                     tol: float = 1e-10) -> VerificationReport:
    """Vertical monotonicity: consecutive-row differences >= -tol everywhere."""
    u = np.asarray(field, dtype=float)
    d = u[:, 1:] - u[:, :-1]
    worst = -float(d.min())
    flat = int(np.argmin(d))
    loc = _locate(grid, flat, d.shape)
    return VerificationReport(
        check_name="monotone-in-y",
        passed=bool(worst <= tol),
        worst_violation=worst,
        worst_location=loc,
        tolerance=tol,
        metadata={"rows": u.shape[1], "columns": u.shape[0]},
    )


def check_cone_limits(field: np.ndarray, grid: PlaneGrid, alpha: float,
                      levels: Optional[Sequence[float]] = None,
                      thresholds: tuple[float, float] = (0.05, 0.95),
                      margin_cells: int = 2) -> VerificationReport:
    """Uniform limits along descending/ascending cones.

    For each level l in ``levels`` (defaults to +-{0.2, 0.35, 0.5, 0.65, 0.8}
    y_max) the sup over the lower cone with apex (0, -l) and the inf over the
    upper cone with apex (0, +l) are measured; the sequences must be monotone
    in l, the deepest sup <= thresholds[0], and the highest inf >=
    thresholds[1].  Cone nodes within ``margin_cells`` of the window edge are
    ignored; an empty cone raises ValueError.
    """
    u = np.asarray(field, dtype=float)
    if levels is None:
        fr = np.array([0.2, 0.35, 0.5, 0.65, 0.8])
        levels = fr * grid.y_max
    levels = np.asarray(sorted(levels), dtype=float)

    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    inner = np.zeros(u.shape, dtype=bool)
    m = margin_cells
    inner[m:-m or None, m:-m or None] = True

    sups = []
    infs = []
    for l in levels:
        lower = cone_mask(x, y, ConeRegion(alpha, -l, "lower")) & inner
        upper = cone_mask(x, y, ConeRegion(alpha, +l, "upper")) & inner
        if not np.any(lower) or not np.any(upper):
            raise ValueError(f"cone at level {l:.2f} contains no interior nodes")
        sups.append(float(u[lower].max()))
        infs.append(float(u[upper].min()))
    sups = np.asarray(sups)   # deeper cones (larger l) -> smaller sup
    infs = np.asarray(infs)   # higher cones (larger l) -> larger inf

    sup_deep = sups[-1]
    inf_high = infs[-1]
    mono_sup = float(np.max(np.diff(sups)))   # should be <= 0
    mono_inf = float(np.min(np.diff(infs)))   # should be >= 0
    worst = max(sup_deep - thresholds[0], thresholds[1] - inf_high,
                mono_sup, -mono_inf)
    return VerificationReport(
        check_name="cone-limits",
        passed=bool(worst <= 0.0),
        worst_violation=worst,
        worst_location=None,
        tolerance=0.0,
        metadata={
            "levels": levels.tolist(),
            "sup_lower_cones": sups.tolist(),
            "inf_upper_cones": infs.tolist(),
            "thresholds": list(thresholds),
        },
    )


def check_ordering(sub: np.ndarray, mid: np.ndarray, super_: np.ndarray,
                   grid: PlaneGrid, tol: float = 0.0) -> VerificationReport:
    """sub <= mid <= min(super, 1) + tol, pointwise."""
    a = np.asarray(sub, dtype=float)
    b = np.asarray(mid, dtype=float)
    c = np.minimum(np.asarray(super_, dtype=float), 1.0)
    low = a - b
    high = b - c
    worst_low = float(low.max())
    worst_high = float(high.max())
    if worst_low >= worst_high:
        worst, flat = worst_low, int(np.argmax(low))
    else:
        worst, flat = worst_high, int(np.argmax(high))
    return VerificationReport(
        check_name="barrier-ordering",
        passed=bool(worst <= tol),
        worst_violation=worst,
        worst_location=_locate(grid, flat, a.shape),
        tolerance=tol,
        metadata={"below_defect": worst_low, "above_defect": worst_high},
    )


def check_comparison_on_cone(lower: np.ndarray, upper: np.ndarray,
                             grid: PlaneGrid, cone: ConeRegion,
                             bound: float, tol: float = 0.0,
                             margin_cells: int = 2) -> VerificationReport:
    """Cone-restricted comparison with its hypotheses.

    Hypotheses measured first: (i) lower <= upper + tol on the one-cell band
    inside the cone edge; (ii) on an upper cone, upper >= bound holds inside
    (bound plays 1 - rho); on a lower cone, lower <= bound inside (bound
    plays the ignition cutoff).  Then the conclusion lower <= upper + tol on
    the whole cone interior.  The failed hypothesis, if any, is named in the
    metadata; the report fails when either a hypothesis or the conclusion
    fails.
    """
    a = np.asarray(lower, dtype=float)
    b = np.asarray(upper, dtype=float)
    x = grid.x_nodes()[:, None]
    y = grid.y_nodes()[None, :]
    inner = np.zeros(a.shape, dtype=bool)
    m = margin_cells
    inner[m:-m or None, m:-m or None] = True

    inside = cone_mask(x, y, cone) & inner
    if not np.any(inside):
        raise ValueError("cone contains no interior nodes")
    # the one-cell band along the cone edge: inside but with a neighbor outside
    full = cone_mask(x, y, cone)
    core = full.copy()
    core[1:, :] &= full[:-1, :]
    core[:-1, :] &= full[1:, :]
    core[:, 1:] &= full[:, :-1]
    core[:, :-1] &= full[:, 1:]
    band = inside & ~core

    failed = None
    boundary_defect = float((a[band] - b[band]).max()) if np.any(band) else -math.inf
    if boundary_defect > tol:
        failed = "boundary-ordering"
    if cone.side == "upper":
        interior_defect = float((bound - b[inside]).max())
        hypothesis = "upper-field >= bound inside the cone"
    else:
        interior_defect = float((a[inside] - bound).max())
        hypothesis = "lower-field <= bound inside the cone"
    if failed is None and interior_defect > tol:
        failed = "interior-bound"

    concl = a - b
    concl_defect = float(concl[inside].max())
    flat = int(np.argmax(np.where(inside, concl, -np.inf)))
    worst = max(boundary_defect, interior_defect, concl_defect)
    return VerificationReport(
        check_name="cone-comparison",
        passed=bool(worst <= tol),
        worst_violation=worst,
        worst_location=_locate(grid, flat, a.shape),
        tolerance=tol,
        metadata={
            "failed_hypothesis": failed,
            "boundary_defect": boundary_defect,
            "interior_bound": hypothesis,
            "interior_defect": interior_defect,
            "conclusion_defect": concl_defect,
            "cone_side": cone.side,
            "cone_level": cone.level_l,
            "bound": bound,
        },
    )


def check_shift_uniqueness(field_a: np.ndarray, field_b: np.ndarray,
                           grid: PlaneGrid, tol: float = 1e-2,
                           bracket_fraction: float = 0.5,
                           resolution_factor: float = 1e-4
                           ) -> tuple[float, VerificationReport]:
    """Best vertical shift aligning two fields and the residual mismatch.

    Minimizes kappa -> max |a(x, y) - b(x, y + kappa)| (b sampled by linear
    interpolation per column) over |kappa| <= bracket_fraction * y_max by a
    coarse scan plus golden-section refinement to resolution_factor * dy.
    The mismatch is evaluated on rows valid for every candidate shift, so the
    objective is continuous; antisymmetry kappa(a, b) = -kappa(b, a) holds by
    construction.  Raises if the minimizer lands on the search boundary.
    """
    a = np.asarray(field_a, dtype=float)
    b = np.asarray(field_b, dtype=float)
    y = grid.y_nodes()
    half = bracket_fraction * grid.y_max
    rows = (y >= y[0] + half) & (y <= y[-1] - half)
    if not np.any(rows):
        raise ValueError("no comparison rows left; shrink bracket_fraction")
    ycmp = y[rows]
    acmp = a[:, rows]

    def mismatch(kappa: float) -> float:
        shifted = np.empty_like(acmp)
        yq = ycmp + kappa
        for i in range(b.shape[0]):
            shifted[i] = np.interp(yq, y, b[i])
        return float(np.max(np.abs(acmp - shifted)))

    ks = np.linspace(-half, half, 129)
    vals = [mismatch(k) for k in ks]
    k0 = int(np.argmin(vals))
    if k0 == 0 or k0 == len(ks) - 1:
        raise ValueError(
            f"best shift sits on the search boundary (+-{half:.2f}); "
            "the fields do not look like shifts of each other")
    lo, hi = ks[k0 - 1], ks[k0 + 1]
    res = resolution_factor * grid.dy
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c = hi - g * (hi - lo)
    d = lo + g * (hi - lo)
    fc, fd = mismatch(c), mismatch(d)
    while hi - lo > res:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = mismatch(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = mismatch(d)
    kappa = 0.5 * (lo + hi)
    best = mismatch(kappa)
    report = VerificationReport(
        check_name="shift-uniqueness",
        passed=bool(best <= tol),
        worst_violation=best,
        worst_location=None,
        tolerance=tol,
        metadata={"shift": kappa, "scan_resolution": res,
                  "comparison_rows": int(np.sum(rows))},
    )
    return kappa, report
