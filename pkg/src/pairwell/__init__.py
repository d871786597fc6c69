"""Electron-positron pair creation in smoothed potential wells (1D Dirac)."""

from .core import (
    MOMENTUM,
    POSITION,
    SPEED_OF_LIGHT,
    ConfigError,
    Grid,
    SimulationConfig,
    SpinorField,
    build_grid,
    make_config,
    norm_squared,
    to_momentum,
    to_position,
    validate_config,
)
from .basis import FreeBasis, build_free_basis, free_energy, plane_wave_state
from .fields import (
    FieldSampler,
    build_sampler,
    envelope,
    shape_one_sided,
    shape_two_sided,
    theta,
)
from .propagator import (
    EvolutionSample,
    EvolutionSchedule,
    PropagationError,
    TransitionMatrix,
    build_schedule,
    dense_oracle,
    evolve_all,
    iter_evolution,
    kinetic_phase,
    split_step,
)
from .observables import (
    DensityResult,
    SpectrumResult,
    TimeSeries,
    momentum_spectrum,
    spatial_density,
    total_number,
)
from .bound_states import (
    BoundStateError,
    BoundStateSet,
    MatchReport,
    PeakMatch,
    PeakPredictionSet,
    PredictedPeak,
    detect_peaks,
    eigen_residual,
    energy_to_mode,
    match_peaks,
    predict_peaks,
    solve_bound_states,
)
from .runio import RunResult, SweepResult, load_config, run_evolve, run_sweep

__version__ = "0.1.0"

__all__ = [
    "MOMENTUM",
    "POSITION",
    "SPEED_OF_LIGHT",
    "ConfigError",
    "Grid",
    "SimulationConfig",
    "SpinorField",
    "build_grid",
    "make_config",
    "norm_squared",
    "to_momentum",
    "to_position",
    "validate_config",
    "FreeBasis",
    "build_free_basis",
    "free_energy",
    "plane_wave_state",
    "FieldSampler",
    "build_sampler",
    "envelope",
    "shape_one_sided",
    "shape_two_sided",
    "theta",
    "EvolutionSample",
    "EvolutionSchedule",
    "PropagationError",
    "TransitionMatrix",
    "build_schedule",
    "dense_oracle",
    "evolve_all",
    "iter_evolution",
    "kinetic_phase",
    "split_step",
    "DensityResult",
    "SpectrumResult",
    "TimeSeries",
    "momentum_spectrum",
    "spatial_density",
    "total_number",
    "BoundStateError",
    "BoundStateSet",
    "MatchReport",
    "PeakMatch",
    "PeakPredictionSet",
    "PredictedPeak",
    "detect_peaks",
    "eigen_residual",
    "energy_to_mode",
    "match_peaks",
    "predict_peaks",
    "solve_bound_states",
    "RunResult",
    "SweepResult",
    "load_config",
    "run_evolve",
    "run_sweep",
]
