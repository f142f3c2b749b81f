"""CSV/JSON emission for fronts, profiles, barriers, traces, and manifests.

All writers create parent directories on demand and use plain csv/json from
the standard library; numerical columns are written in repr precision so
round-trips are lossless for double precision.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path
from typing import Any

import numpy as np

from .barriers import REGION_CODES, BarrierPair, HProfile, PlaneGrid
from .evolve import SpeedTrace
from .strip import FrontProfile, SpeedEstimate

__all__ = [
    "jsonable",
    "write_profile_csv",
    "write_speed_json",
    "write_h_profile_csv",
    "write_barrier_csv",
    "write_trace_csv",
    "write_json",
]


def _prep(path) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def jsonable(obj: Any) -> Any:
    """Recursively convert dataclasses/arrays/numpy scalars for json.dump."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {}
        for f in dataclasses.fields(obj):
            if f.name.startswith("_"):
                continue
            out[f.name] = jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, np.ndarray):
        if obj.size > 64:
            return {"shape": list(obj.shape),
                    "min": float(np.nanmin(obj)) if obj.size else None,
                    "max": float(np.nanmax(obj)) if obj.size else None}
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and (obj != obj or obj in (float("inf"), float("-inf"))):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_profile_csv(path, profile: FrontProfile) -> Path:
    """Strip front as rows of (x, y, u)."""
    p = _prep(path)
    g = profile.grid
    xs = g.x_nodes()
    ys = g.y_nodes()
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "u"])
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                w.writerow([repr(float(x)), repr(float(y)),
                            repr(float(profile.values[i, j]))])
    return p


def write_speed_json(path, estimate: SpeedEstimate, **extra) -> Path:
    """Speed estimate plus caller-supplied context (variant, alpha, grid...)."""
    p = _prep(path)
    payload = jsonable(estimate)
    payload.update({k: jsonable(v) for k, v in extra.items()})
    p.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return p


def write_h_profile_csv(path, profile: HProfile) -> Path:
    """Superposition profile as rows of (z, h, h_prime, H).

    h columns are empty below the junction where only the linear extension
    exists.
    """
    p = _prep(path)
    ext = profile if profile.H_values is not None else None
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["z", "h", "h_prime", "H"])
        zjunc = profile.theta / 2.0
        hmap = {float(z): (float(h), float(hp)) for z, h, hp in
                zip(profile.z_h, profile.h_values, profile.h_derivative)}
        for idx, z in enumerate(profile.z_nodes):
            z = float(z)
            h, hp = hmap.get(z, (None, None)) if z >= zjunc else (None, None)
            H = (float(ext.H_values[idx]) if ext is not None
                 else (2.0 * z if z < zjunc else (h if h is not None else "")))
            w.writerow([repr(z),
                        "" if h is None else repr(h),
                        "" if hp is None else repr(hp),
                        repr(H) if H != "" else ""])
    return p


def write_barrier_csv(path, grid: PlaneGrid, pair: BarrierPair,
                      region: np.ndarray) -> Path:
    """Barriers as rows of (x, y, sub, super, region-label)."""
    p = _prep(path)
    xs = grid.x_nodes()
    ys = grid.y_nodes()
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "sub", "super", "region"])
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                w.writerow([repr(float(x)), repr(float(y)),
                            repr(float(pair.sub[i, j])),
                            repr(float(pair.super[i, j])),
                            REGION_CODES[int(region[i, j])]])
    return p


def write_trace_csv(path, trace: SpeedTrace) -> Path:
    """Half-level trace as rows of (t, y_lab)."""
    p = _prep(path)
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "level_y_lab"])
        for t, yv in zip(trace.times, trace.level_positions):
            w.writerow([repr(float(t)), repr(float(yv))])
    return p


def write_json(path, payload) -> Path:
    p = _prep(path)
    p.write_text(json.dumps(jsonable(payload), indent=2, sort_keys=True))
    return p
