"""
Oracle Module

Exact linear-Gaussian propagation for piecewise-constant harmonic dynamics.
"""

from .maps import (
    CovarianceState,
    segment_map,
    pulse_map,
    process_noise,
    propagate,
    thermal_covariance,
)
from .protocol import (
    GrowthConstants,
    predicted_expansion_db,
    growth_constants,
    initial_covariance,
    propagate_schedule,
    covariance_columns,
)
from .sampling import sample_linear_trajectory

__all__ = [
    "CovarianceState",
    "segment_map",
    "pulse_map",
    "process_noise",
    "propagate",
    "thermal_covariance",
    "GrowthConstants",
    "predicted_expansion_db",
    "growth_constants",
    "initial_covariance",
    "propagate_schedule",
    "covariance_columns",
    "sample_linear_trajectory",
]
