#!/usr/bin/env python3

"""
Protocol Prediction

Analytic gain of the pulse train and exact covariance propagation along a
full simulation schedule in the harmonic approximation.
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..functional.errors import ValidationError
from ..integrator.config import ExplicitInitial, SimConfig, ThermalInitial
from ..modulation import ModulationSchedule, schedule_value, transition_times
from ..physics import TrapModel
from .maps import CovarianceState, propagate, thermal_covariance

logger = logging.getLogger(__name__)


def predicted_expansion_db(n_pulses: int, depth: float) -> float:
    """n * 10 log10(1/sqrt(S)): growth of the major-axis standard deviation."""
    if n_pulses < 0:
        raise ValidationError("n_pulses >= 0", key="modulation.pulses", value=n_pulses)
    if not 0 < depth <= 1:
        raise ValidationError("0 < depth <= 1", key="modulation.depth", value=depth)
    return n_pulses * 10.0 * math.log10(1.0 / math.sqrt(depth))


@dataclass(frozen=True)
class GrowthConstants:
    """
    Two readings of the same exponential growth: tau_amp for the standard
    deviation, tau_var = tau_amp / 2 for the variance.
    """
    tau_amp: float
    tau_var: float
    db_per_pulse: float
    pulse_period: float

    def as_dict(self) -> Dict[str, float]:
        return {
            "tau_amp_s": self.tau_amp,
            "tau_var_s": self.tau_var,
            "db_per_pulse": self.db_per_pulse,
            "pulse_period_s": self.pulse_period,
        }


def growth_constants(depth: float, omega_z: float) -> GrowthConstants:
    schedule = ModulationSchedule.from_depth(depth, omega_z, 1)
    period = schedule.pulse_period
    log_gain = math.log(1.0 / math.sqrt(depth))
    if log_gain == 0:
        return GrowthConstants(math.inf, math.inf, 0.0, period)
    return GrowthConstants(
        tau_amp=period / log_gain,
        tau_var=period / (2.0 * log_gain),
        db_per_pulse=predicted_expansion_db(1, depth),
        pulse_period=period,
    )


def initial_covariance(config: SimConfig) -> CovarianceState:
    initial = config.initial_state
    if isinstance(initial, ThermalInitial):
        return thermal_covariance(initial.temperature, config.trap, config.particle)
    if isinstance(initial, ExplicitInitial):
        point = initial.point
        return CovarianceState(np.array([point.position, point.velocity]), np.zeros((2, 2)))
    raise ValidationError("initial state must be thermal or explicit", key="sim.initial", value=initial)


def _schedule_events(config: SimConfig, horizon: float) -> np.ndarray:
    events = [transition_times(config.schedule)]
    if config.feedback_gain > 0:
        events.append(np.array(config.feedback_enabled_interval, dtype=float))
        if config.feedback_before_protocol:
            events.append(np.array([config.schedule.start_time]))
    merged = np.concatenate(events)
    return merged[np.isfinite(merged) & (merged > 0) & (merged < horizon)]


def propagate_schedule(state: CovarianceState, config: SimConfig,
                       times: Sequence[float]) -> List[CovarianceState]:
    """
    Exact mean and covariance at each of ``times`` (ascending, >= 0),
    starting from ``state`` at t = 0. The trap is treated as harmonic and
    feedback follows its time window only.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return []
    if times[0] < 0 or np.any(np.diff(times) < 0):
        raise ValidationError("times ascending and >= 0", value=(times[0], times[-1]))
    if config.trap.model is TrapModel.GAUSSIAN_AXIAL:
        logger.debug("Oracle uses the harmonic limit of the gaussian-axial trap")
    if config.feedback_lock_threshold > 0:
        logger.warning("Oracle ignores the feedback lock threshold")

    omega = config.trap.angular_frequency
    diffusion = config.velocity_diffusion
    points = np.union1d(times, _schedule_events(config, float(times[-1])))

    states_at: Dict[float, CovarianceState] = {}
    current, t = state, 0.0
    for point in points:
        point = float(point)
        if point > t:
            midpoint = 0.5 * (t + point)
            depth = schedule_value(config.schedule, midpoint)
            gamma = config.damping + (config.feedback_gain if config.feedback_active(midpoint) else 0.0)
            current = propagate(current, omega * math.sqrt(depth), gamma, diffusion, point - t)
            t = point
        states_at[point] = current
    return [states_at[float(t)] for t in times]


def covariance_columns(states: Sequence[CovarianceState]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(sigma_zz, sigma_zv, sigma_vv) arrays."""
    moments = np.array([s.second_moments for s in states]).reshape(-1, 3)
    return moments[:, 0], moments[:, 1], moments[:, 2]
