#!/usr/bin/env python3

"""
Pulse Schedule

Piecewise-constant stiffness modulation S(t): every pulse lowers the trap
power to ``depth`` for tau_low (a quarter period of the softened trap) and
restores it for tau_high (a quarter period of the original trap).
Transitions are ideal steps.
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from ..functional.errors import ValidationError

logger = logging.getLogger(__name__)


def pulse_timings(depth: float, omega_z: float) -> tuple:
    """(tau_low, tau_high) = (pi / (2 omega sqrt(S)), pi / (2 omega))"""
    if not 0 < depth <= 1:
        raise ValidationError("0 < depth <= 1", key="modulation.depth", value=depth)
    if omega_z <= 0:
        raise ValidationError("omega_z > 0", key="trap.f_z_hz", value=omega_z)
    tau_high = math.pi / (2.0 * omega_z)
    tau_low = tau_high / math.sqrt(depth)
    return tau_low, tau_high


@dataclass(frozen=True)
class ModulationSchedule:
    depth: float
    tau_low: float
    tau_high: float
    pulse_count: int
    start_time: float = 0.0

    def __post_init__(self):
        if not 0 < self.depth <= 1:
            raise ValidationError("0 < depth <= 1", key="modulation.depth", value=self.depth)
        if self.tau_low <= 0 or self.tau_high <= 0:
            raise ValidationError("tau_low > 0 and tau_high > 0",
                                  value=(self.tau_low, self.tau_high))
        if self.pulse_count < 0:
            raise ValidationError("pulse_count >= 0", key="modulation.pulses", value=self.pulse_count)
        if not math.isfinite(self.start_time):
            raise ValidationError("start_time finite", key="modulation.start_s", value=self.start_time)

    @classmethod
    def from_depth(cls, depth: float, omega_z: float, pulse_count: int,
                   start_time: float = 0.0) -> 'ModulationSchedule':
        tau_low, tau_high = pulse_timings(depth, omega_z)
        return cls(depth, tau_low, tau_high, pulse_count, start_time)

    @classmethod
    def unmodulated(cls, omega_z: float) -> 'ModulationSchedule':
        return cls.from_depth(1.0, omega_z, 0)

    @property
    def pulse_period(self) -> float:
        return self.tau_low + self.tau_high

    @property
    def protocol_duration(self) -> float:
        return self.pulse_count * self.pulse_period

    @property
    def end_time(self) -> float:
        return self.start_time + self.protocol_duration

    @property
    def total_low_time(self) -> float:
        return self.pulse_count * self.tau_low


def schedule_value(schedule: ModulationSchedule, t: float) -> float:
    """depth inside a low phase, 1 everywhere else."""
    if schedule.pulse_count == 0 or t < schedule.start_time or t >= schedule.end_time:
        return 1.0
    elapsed = t - schedule.start_time
    k = math.floor(elapsed / schedule.pulse_period)
    local = elapsed - k * schedule.pulse_period
    return schedule.depth if local < schedule.tau_low else 1.0


def schedule_values(schedule: ModulationSchedule, times: Union[np.ndarray, list]) -> np.ndarray:
    """Vectorised schedule_value."""
    t = np.asarray(times, dtype=float)
    values = np.ones_like(t)
    if schedule.pulse_count == 0:
        return values
    inside = (t >= schedule.start_time) & (t < schedule.end_time)
    elapsed = t[inside] - schedule.start_time
    local = elapsed - np.floor(elapsed / schedule.pulse_period) * schedule.pulse_period
    values[inside] = np.where(local < schedule.tau_low, schedule.depth, 1.0)
    return values


def modulation_frequency(schedule: ModulationSchedule) -> float:
    """omega_S / 2 pi = 1 / (tau_low + tau_high)"""
    if schedule.pulse_count < 1:
        raise ValidationError("pulse_count >= 1", key="modulation.pulses", value=schedule.pulse_count)
    return 1.0 / schedule.pulse_period


def transition_times(schedule: ModulationSchedule) -> np.ndarray:
    """
    Every switch instant: each pulse start, each low-to-high switch, and the
    protocol end. Empty when there are no pulses.
    """
    n = schedule.pulse_count
    if n == 0:
        return np.empty(0)
    starts = schedule.start_time + np.arange(n) * schedule.pulse_period
    switches = np.empty(2 * n + 1)
    switches[0:2 * n:2] = starts
    switches[1:2 * n:2] = starts + schedule.tau_low
    switches[-1] = schedule.end_time
    return switches


def describe_protocol(schedule: ModulationSchedule, omega_z: float) -> Dict[str, float]:
    """Summary printed by the ``protocol`` subcommand."""
    f_z = omega_z / (2.0 * math.pi)
    summary = {
        "depth": schedule.depth,
        "pulses": schedule.pulse_count,
        "tau_low_s": schedule.tau_low,
        "tau_high_s": schedule.tau_high,
        "pulse_period_s": schedule.pulse_period,
        "start_s": schedule.start_time,
        "duration_s": schedule.protocol_duration,
        "end_s": schedule.end_time,
        "total_low_time_s": schedule.total_low_time,
    }
    if schedule.pulse_count >= 1:
        f_s = modulation_frequency(schedule)
        summary["f_s_hz"] = f_s
        summary["f_s_over_f_z"] = f_s / f_z
    return summary
