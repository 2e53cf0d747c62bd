"""Waveform design for arrays whose carrier step makes steering range-dependent.

The package models the receive snapshot of a pulsed array radar in which
every transmit element is offset in carrier frequency, builds the
distortionless minimum-variance receive filter for that snapshot, and
designs unit-energy transmit waveforms that maximize the filter's output
signal-to-interference-plus-noise ratio under similarity and spectral
containment constraints.  Two block-splitting solvers are provided along
with spectrum and pulse-compression analysis utilities and a command-line
interface that writes CSV/JSON artifacts.
"""
from .analysis import (
    CompressionProfile,
    SpectrumCut,
    SpectrumGrid,
    default_grid,
    output_spectrum_map,
    point_output_power,
    pulse_compression,
    scene_power_map,
    spectrum_cut,
)
from .config_io import ConfigError, Scenario, config_digest, load_scenario, preset_path
from .constraints import (
    ConstraintSet,
    FeasibilityReport,
    band_matrix,
    band_root,
    build_constraints,
    clip_to_similarity,
    feasibility_report,
    polish_feasibility,
    project_band_exterior,
    project_energy_sphere,
    project_similarity_ball,
    rescale_to_antenna_energy,
)
from .mmadmm import (
    Surrogate,
    lift_matrix,
    lift_vector,
    mmadmm_init,
    mmadmm_run,
    surrogate_components,
    unlift_vector,
)
from .mvdr import (
    SinrModel,
    interference_covariance,
    mvdr_weights,
    output_sinr,
    output_sinr_with_weights,
)
from .padmm import padmm_init, padmm_run, padmm_step
from .qp import QpInfeasibleError, QpProblem, QpSolution, solve_qp
from .signal_model import (
    RangeGate,
    ResponseOperator,
    Source,
    SourceSet,
    SpatialFrequencies,
    SystemConfig,
    WaveformMatrix,
    commutation_matrix,
    range_gate,
    receive_steering,
    reference_olfm,
    response_operator,
    shift_matrix,
    simulate_snapshot,
    source_response,
    spatial_frequencies,
    transmit_steering,
    wrap_frequency,
)
from .trace import SolverResult, StopRule, TraceRecord

__version__ = "0.1.0"

__all__ = [
    "CompressionProfile",
    "ConfigError",
    "ConstraintSet",
    "FeasibilityReport",
    "QpInfeasibleError",
    "QpProblem",
    "QpSolution",
    "RangeGate",
    "ResponseOperator",
    "Scenario",
    "SinrModel",
    "SolverResult",
    "Source",
    "SourceSet",
    "SpatialFrequencies",
    "SpectrumCut",
    "SpectrumGrid",
    "StopRule",
    "Surrogate",
    "SystemConfig",
    "TraceRecord",
    "WaveformMatrix",
    "band_matrix",
    "band_root",
    "build_constraints",
    "clip_to_similarity",
    "commutation_matrix",
    "config_digest",
    "default_grid",
    "feasibility_report",
    "interference_covariance",
    "lift_matrix",
    "lift_vector",
    "load_scenario",
    "mmadmm_init",
    "mmadmm_run",
    "mvdr_weights",
    "output_sinr",
    "output_sinr_with_weights",
    "output_spectrum_map",
    "padmm_init",
    "padmm_run",
    "padmm_step",
    "point_output_power",
    "polish_feasibility",
    "preset_path",
    "project_band_exterior",
    "project_energy_sphere",
    "project_similarity_ball",
    "pulse_compression",
    "range_gate",
    "receive_steering",
    "reference_olfm",
    "rescale_to_antenna_energy",
    "response_operator",
    "scene_power_map",
    "shift_matrix",
    "simulate_snapshot",
    "solve_qp",
    "source_response",
    "spatial_frequencies",
    "spectrum_cut",
    "surrogate_components",
    "transmit_steering",
    "unlift_vector",
    "wrap_frequency",
    "__version__",
]
