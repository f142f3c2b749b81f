"""Numerical laboratory for conical (curved) traveling fronts of

    u_t = Lap(u) + q(x) u_y + f(u)

with an ignition-type reaction f and a mean-zero periodic shear q.  The
package computes the unique pulsating-front speed on a periodic strip,
assembles explicit sub-/supersolution barriers from two sheared strip
fronts, evolves the full two-dimensional equation to a steady curved front
in a descending frame, and verifies the speed relation
c = c_strip / sin(alpha), monotonicity, the conical far-field limits, and
uniqueness of the steady shape up to vertical shifts.
"""

__version__ = "0.1.0"

from .model import (CombustionNonlinearity, ConeRegion, DiffusionMatrix,
                    ShearFlow, cone_mask, cone_membership, cosine_flow,
                    diffusion_matrix, eval_f, quadratic_ignition,
                    reaction_antiderivative, tabulated_flow,
                    tabulated_ignition, validate_flow, validate_nonlinearity,
                    zero_flow, zero_reaction)
from .planar import PlanarProfile, SpeedBracketError, planar_front_speed_1d
from .strip import (FrontProfile, PeriodicStripGrid, SolverError,
                    SpeedEstimate, StripSolveOptions, check_speed_symmetry,
                    drift_at_speed, normalize_front, reflect_profile,
                    resample_profile, solve_pulsating_front, strip_residual)
from .barriers import (BandConstants, BarrierPair, Components, HProfile,
                       PlaneGrid, SubsolutionCertificate,
                       SupersolutionCertificate, build_components,
                       build_subsolution, build_supersolution,
                       calibrate_residual_floor, certify_subsolution_margin,
                       certify_supersolution_cases, choose_beta,
                       classify_region, classify_region_grid, extend_H,
                       integrate_h, measure_band_constants, residual,
                       rotated_coordinates)
from .evolve import (EvolutionState, EvolveOptions, EvolveResult,
                     FormulaCheck, SpeedTrace, compare_speed_formula, evolve,
                     initial_state, measure_speed)
from .verify import (VerificationReport, check_comparison_on_cone,
                     check_cone_limits, check_monotone_y, check_ordering,
                     check_shift_uniqueness)
from .config import (EvolutionConfig, ExperimentConfig, OutputConfig,
                     PlaneGridConfig, ProblemConfig, StripGridConfig,
                     ToleranceConfig, load_config)
from .pipeline import (RunContext, RunManifest, StageRecord, emit_report,
                       run_experiment, stages_for_verb)

__all__ = [
    "__version__",
    # model
    "CombustionNonlinearity", "ConeRegion", "DiffusionMatrix", "ShearFlow",
    "cone_mask", "cone_membership", "cosine_flow", "diffusion_matrix",
    "eval_f", "quadratic_ignition", "reaction_antiderivative",
    "tabulated_flow", "tabulated_ignition", "validate_flow",
    "validate_nonlinearity", "zero_flow", "zero_reaction",
    # planar
    "PlanarProfile", "SpeedBracketError", "planar_front_speed_1d",
    # strip
    "FrontProfile", "PeriodicStripGrid", "SolverError", "SpeedEstimate",
    "StripSolveOptions", "check_speed_symmetry", "drift_at_speed",
    "normalize_front", "reflect_profile", "resample_profile",
    "solve_pulsating_front", "strip_residual",
    # barriers
    "BandConstants", "BarrierPair", "Components", "HProfile", "PlaneGrid",
    "SubsolutionCertificate", "SupersolutionCertificate", "build_components",
    "build_subsolution", "build_supersolution", "calibrate_residual_floor",
    "certify_subsolution_margin", "certify_supersolution_cases",
    "choose_beta", "classify_region", "classify_region_grid", "extend_H",
    "integrate_h", "measure_band_constants", "residual",
    "rotated_coordinates",
    # evolve
    "EvolutionState", "EvolveOptions", "EvolveResult", "FormulaCheck",
    "SpeedTrace", "compare_speed_formula", "evolve", "initial_state",
    "measure_speed",
    # verify
    "VerificationReport", "check_comparison_on_cone", "check_cone_limits",
    "check_monotone_y", "check_ordering", "check_shift_uniqueness",
    # config / pipeline
    "EvolutionConfig", "ExperimentConfig", "OutputConfig", "PlaneGridConfig",
    "ProblemConfig", "StripGridConfig", "ToleranceConfig", "load_config",
    "RunContext", "RunManifest", "StageRecord", "emit_report",
    "run_experiment", "stages_for_verb",
]
