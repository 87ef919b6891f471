"""
Analysis Module

Ensemble statistics and the derived expansion metrics.
"""

from .stats import EnsembleStats, ensemble_stats, ensemble_stats_from_arrays
from .metrics import (
    REFERENCE_TEMPERATURE,
    DEFAULT_SMOOTHING_WINDOW,
    DEFAULT_MIN_PROMINENCE,
    expansion_db,
    variance_expansion_db,
    effective_temperature,
    phonon_occupation,
    thermal_spread,
    GrowthFit,
    fit_window_mask,
    growth_time_constant,
    relaxation_time_constant,
    smooth,
    find_peak,
    radius_crossing_time,
    ExpansionMetrics,
    summarize_expansion,
    temperature_summary,
)
from .histogram import (
    PhaseSpaceHistogram,
    phase_space_histogram,
    phase_space_aspect_ratio,
    sample_index,
)

__all__ = [
    "EnsembleStats",
    "ensemble_stats",
    "ensemble_stats_from_arrays",
    "REFERENCE_TEMPERATURE",
    "DEFAULT_SMOOTHING_WINDOW",
    "DEFAULT_MIN_PROMINENCE",
    "expansion_db",
    "variance_expansion_db",
    "effective_temperature",
    "phonon_occupation",
    "thermal_spread",
    "GrowthFit",
    "fit_window_mask",
    "growth_time_constant",
    "relaxation_time_constant",
    "smooth",
    "find_peak",
    "radius_crossing_time",
    "ExpansionMetrics",
    "summarize_expansion",
    "temperature_summary",
    "PhaseSpaceHistogram",
    "phase_space_histogram",
    "phase_space_aspect_ratio",
    "sample_index",
]
