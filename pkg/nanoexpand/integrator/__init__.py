"""
Integrator Module

Stochastic integration of the axial equation of motion, single trajectories
and parallel ensembles.
"""

from .config import (
    SimConfig,
    FeedbackSettings,
    ThermalInitial,
    ExplicitInitial,
    InitialState,
    default_time_step,
    DEFAULT_FEEDBACK_GAIN,
    DEFAULT_SAMPLE_RATE,
)
from .rng import trajectory_rng, NoiseBuffer
from .trajectory import Trajectory, Ensemble
from .langevin import (
    draw_initial_state,
    ou_coefficients,
    step,
    IntegrationGrid,
    integration_grid,
    simulate_batch,
    simulate,
)
from .ensemble import simulate_ensemble, resolve_workers, DEFAULT_BATCH_SIZE

__all__ = [
    "SimConfig",
    "FeedbackSettings",
    "ThermalInitial",
    "ExplicitInitial",
    "InitialState",
    "default_time_step",
    "DEFAULT_FEEDBACK_GAIN",
    "DEFAULT_SAMPLE_RATE",
    "trajectory_rng",
    "NoiseBuffer",
    "Trajectory",
    "Ensemble",
    "draw_initial_state",
    "ou_coefficients",
    "step",
    "IntegrationGrid",
    "integration_grid",
    "simulate_batch",
    "simulate",
    "simulate_ensemble",
    "resolve_workers",
    "DEFAULT_BATCH_SIZE",
]
