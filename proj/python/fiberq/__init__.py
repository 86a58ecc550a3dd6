"""Lindblad propagation of quantum light in nonlinear fibers.

Thin wrapper over the compiled ``_fiberq`` extension. Matrices are numpy
complex arrays in the Fock basis with mode 0 slowest.
"""

import json

from ._fiberq import (
    BSParams,
    ConfigError,
    DimensionError,
    InvariantBreach,
    LindbladSystem,
    MultimodeParams,
    ParameterError,
    PumpSubstitution,
    SpFWMParams,
    build_bragg,
    build_multimode,
    build_spfwm,
    heralding_metrics,
    integrate_mean_field,
    lindblad_rhs,
    mode_wavenumbers,
    normalize_config,
    phase_match,
    propagate,
    pump_amplitude,
    pump_depletion,
    reduced_mean_field,
    rotating_frame,
    run_invariant_suite,
    sprs_depletion_rate,
)
from ._fiberq import execute_scenario as _execute_scenario

__all__ = [
    "BSParams",
    "ConfigError",
    "DimensionError",
    "InvariantBreach",
    "LindbladSystem",
    "MultimodeParams",
    "ParameterError",
    "PumpSubstitution",
    "SpFWMParams",
    "build_bragg",
    "build_multimode",
    "build_spfwm",
    "heralding_metrics",
    "integrate_mean_field",
    "lindblad_rhs",
    "mode_wavenumbers",
    "normalize_config",
    "phase_match",
    "propagate",
    "pump_amplitude",
    "pump_depletion",
    "reduced_mean_field",
    "rotating_frame",
    "run_invariant_suite",
    "run_config",
    "sprs_depletion_rate",
]


def run_config(text, overrides=None):
    """Run a scenario given as config text. Returns (csv_text, summary dict)."""
    csv, summary = _execute_scenario(text, list((overrides or {}).items()))
    return csv, json.loads(summary)
