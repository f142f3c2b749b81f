"""Experiment configuration: JSON-backed dataclasses and model factories.

A configuration bundles the physical problem (reaction family, shear flow,
half-angles), the strip/plane discretizations, tolerances, evolution
controls, and output destinations.  ``--grid-scale`` style refinement is a
pure grid transformation: the same experiment on nx, ny multiplied by the
factor.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .barriers import PlaneGrid
from .model import (CombustionNonlinearity, ShearFlow, cosine_flow,
                    quadratic_ignition, zero_flow)
from .strip import PeriodicStripGrid

__all__ = [
    "ProblemConfig",
    "StripGridConfig",
    "PlaneGridConfig",
    "ToleranceConfig",
    "EvolutionConfig",
    "OutputConfig",
    "ExperimentConfig",
    "load_config",
]


@dataclass(frozen=True)
class ProblemConfig:
    theta: float = 0.3
    reaction_family: str = "quadratic"      # or "zero"
    reaction_scale: float = 1.0
    flow_family: str = "cosine"             # or "zero"
    flow_amplitude: float = 0.5
    period: float = 1.0
    alphas: tuple = (math.pi / 3, math.pi / 2)

    def __post_init__(self) -> None:
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0,1)")
        for a in self.alphas:
            if not 0.0 < a < math.pi:
                raise ValueError(f"half-angle {a} outside (0, pi)")
        if self.period <= 0:
            raise ValueError("period must be positive")

    def build_model(self) -> CombustionNonlinearity:
        if self.reaction_family == "quadratic":
            return quadratic_ignition(self.theta, self.reaction_scale)
        if self.reaction_family == "zero":
            from .model import zero_reaction
            return zero_reaction(self.theta)
        raise ValueError(f"unknown reaction family {self.reaction_family!r}")

    def build_flow(self) -> ShearFlow:
        if self.flow_family == "cosine":
            return cosine_flow(self.flow_amplitude, self.period)
        if self.flow_family == "zero":
            return zero_flow(self.period)
        raise ValueError(f"unknown flow family {self.flow_family!r}")


@dataclass(frozen=True)
class StripGridConfig:
    nx: int = 64
    ny: int = 256
    y_max: float = 12.0
    auto_extend: bool = True     # grow y_max to cover rotated plane ordinates

    def grid(self, period: float) -> PeriodicStripGrid:
        return PeriodicStripGrid(period_length=period, nx=self.nx,
                                 y_max=self.y_max, ny=self.ny)

    def extended_grid(self, period: float, alpha: float,
                      plane: "PlaneGridConfig", margin: float = 2.0
                      ) -> PeriodicStripGrid:
        """Grid whose Y-range covers every rotated plane ordinate (same dy)."""
        need = (plane.x_max * abs(math.cos(alpha))
                + plane.y_max * math.sin(alpha) + margin)
        if not self.auto_extend or need <= self.y_max:
            return self.grid(period)
        dy = 2.0 * self.y_max / self.ny
        ny = int(math.ceil(2.0 * need / dy / 16.0)) * 16
        y_max = 0.5 * ny * dy
        return PeriodicStripGrid(period_length=period, nx=self.nx,
                                 y_max=y_max, ny=ny)


@dataclass(frozen=True)
class PlaneGridConfig:
    # the window must hold several curvature decay lengths D / (c cos(alpha))
    # of the conical cap on each side, or wall-dominated states (bowed arcs,
    # or full flattening under mirror walls) replace the conical front; at
    # alpha = pi/3 the decay length is ~3.5, and x_max = 12 leaves the
    # measured speed within 0.4% of the unbounded-plane value.
    nx: int = 384
    ny: int = 448
    x_max: float = 12.0
    y_max: float = 12.0

    def grid(self) -> PlaneGrid:
        return PlaneGrid(x_max=self.x_max, y_max=self.y_max,
                         nx=self.nx, ny=self.ny)


@dataclass(frozen=True)
class ToleranceConfig:
    speed_bracket: float = 1e-4
    drift_tol: float = 1e-5
    planar_rtol: float = 0.01        # conical vs planar oracle (degenerate case)
    formula_rtol: float = 0.02       # conical vs strip-speed / sin(alpha)
    symmetry_rtol: float = 0.005     # |c_A - c_B| / c_A
    estimator_rtol: float = 0.01     # trace fit vs endpoint displacement
    steady_tol: float = 1e-6
    shift_tol: float = 1e-2
    monotone_tol: float = 1e-10


@dataclass(frozen=True)
class EvolutionConfig:
    t_max: float = 400.0
    check_interval: float = 0.1
    confirm_checks: int = 50
    initial_data: str = "subsolution"    # or "ramp", "supersolution"
    run_shift_pair: bool = True          # also evolve from min(super,1)
    min_settle: float = 8.0
    speed_only: bool = False             # skip the steadiness certificate
    duration: float = 12.0               # used when speed_only


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "out"
    emit_csv: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    problem: ProblemConfig = field(default_factory=ProblemConfig)
    strip_grid: StripGridConfig = field(default_factory=StripGridConfig)
    plane_grid: PlaneGridConfig = field(default_factory=PlaneGridConfig)
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    outputs: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0

    def scaled(self, factor: float) -> "ExperimentConfig":
        """Same experiment with nx/ny of both grids multiplied by factor."""
        if factor <= 0:
            raise ValueError("grid-scale factor must be positive")

        def s(n: int) -> int:
            return max(16, int(round(n * factor)))

        return dataclasses.replace(
            self,
            strip_grid=dataclasses.replace(
                self.strip_grid, nx=s(self.strip_grid.nx),
                ny=s(self.strip_grid.ny)),
            plane_grid=dataclasses.replace(
                self.plane_grid, nx=s(self.plane_grid.nx),
                ny=s(self.plane_grid.ny)),
        )

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


_SECTIONS = {
    "problem": ProblemConfig,
    "strip_grid": StripGridConfig,
    "plane_grid": PlaneGridConfig,
    "tolerances": ToleranceConfig,
    "evolution": EvolutionConfig,
    "outputs": OutputConfig,
}


def _build_section(cls, data: dict):
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown keys for {cls.__name__}: {sorted(unknown)}")
    if "alphas" in data:
        data = {**data, "alphas": tuple(float(a) for a in data["alphas"])}
    return cls(**data)


def config_from_dict(data: dict[str, Any]) -> ExperimentConfig:
    unknown = set(data) - set(_SECTIONS) - {"seed"}
    if unknown:
        raise ValueError(f"unknown top-level config keys: {sorted(unknown)}")
    kwargs = {}
    for key, cls in _SECTIONS.items():
        if key in data:
            kwargs[key] = _build_section(cls, dict(data[key]))
    if "seed" in data:
        kwargs["seed"] = int(data["seed"])
    return ExperimentConfig(**kwargs)


def load_config(path) -> ExperimentConfig:
    """Read and validate a JSON experiment configuration."""
    text = Path(path).read_text()
    return config_from_dict(json.loads(text))
