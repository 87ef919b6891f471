#!/usr/bin/env python3

"""
Simulation Configuration

Everything one stochastic run needs: the physical specs, the pulse
schedule, the cold-damping feedback window, the time grid, the RNG seed
and the initial-state rule.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Tuple, Union

from ..functional.errors import ValidationError
from ..modulation import ModulationSchedule
from ..physics import (
    BOLTZMANN,
    GasEnvironment,
    ParticleSpec,
    PhaseSpacePoint,
    TrapSpec,
    gas_damping_rate,
    published_gas,
    published_particle,
    published_trap,
)

DEFAULT_FEEDBACK_GAIN = 2.0 / 0.044   # sigma_z relaxes with 2 / gamma_fb = 44 ms
DEFAULT_SAMPLE_RATE = 2.0e6
DEFAULT_STEPS_PER_PERIOD = 200


@dataclass(frozen=True)
class ThermalInitial:
    """Independent Gaussians with sigma_z^2 = k_B T/(m w^2), sigma_v^2 = k_B T/m"""
    temperature: float

    def __post_init__(self):
        if self.temperature < 0:
            raise ValidationError("temperature >= 0", key="sim.initial_temperature_k",
                                  value=self.temperature)


@dataclass(frozen=True)
class ExplicitInitial:
    point: PhaseSpacePoint


InitialState = Union[ThermalInitial, ExplicitInitial]


@dataclass(frozen=True)
class FeedbackSettings:
    """Cold damping -gain * v; a zero lock threshold disables the |z| condition."""
    gain: float
    enabled_interval: Tuple[float, float]
    before_protocol: bool
    lock_threshold: float

    @property
    def uses_lock(self) -> bool:
        return self.gain > 0 and self.lock_threshold > 0


def default_time_step(trap: TrapSpec) -> float:
    return 1.0 / (DEFAULT_STEPS_PER_PERIOD * trap.frequency_hz)


@dataclass(frozen=True)
class SimConfig:
    particle: ParticleSpec
    gas: GasEnvironment
    trap: TrapSpec
    schedule: ModulationSchedule
    time_step: float
    duration: float
    sample_rate: float = DEFAULT_SAMPLE_RATE
    seed: int = 0
    initial_state: InitialState = field(default_factory=lambda: ThermalInitial(4.18e-3))
    feedback_gain: float = 0.0
    feedback_enabled_interval: Tuple[float, float] = (math.inf, math.inf)
    feedback_before_protocol: bool = False
    feedback_lock_threshold: float = 0.0

    def __post_init__(self):
        if not self.time_step > 0:
            raise ValidationError("time_step > 0", key="sim.time_step_s", value=self.time_step)
        if not self.duration >= 0 or not math.isfinite(self.duration):
            raise ValidationError("duration >= 0 and finite", key="sim.duration_s", value=self.duration)
        if not self.sample_rate > 0:
            raise ValidationError("sample_rate > 0", key="sim.sample_rate_hz", value=self.sample_rate)
        if self.sample_rate * self.time_step > 1.0 + 1e-9:
            raise ValidationError("sample_rate <= 1/time_step", key="sim.sample_rate_hz",
                                  value=self.sample_rate)
        if self.feedback_gain < 0:
            raise ValidationError("feedback gain >= 0", key="feedback.gain_per_s", value=self.feedback_gain)
        start, stop = self.feedback_enabled_interval
        if not start <= stop:
            raise ValidationError("feedback enable_start_s <= enable_stop_s",
                                  key="feedback.enable_start_s", value=(start, stop))
        if self.feedback_lock_threshold < 0:
            raise ValidationError("lock threshold >= 0", key="feedback.lock_threshold_m",
                                  value=self.feedback_lock_threshold)
        if not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed is a 64-bit unsigned integer", key="sim.seed", value=self.seed)

    @property
    def damping(self) -> float:
        """Gas damping Gamma_m [1/s]."""
        return gas_damping_rate(self.gas, self.particle)

    @property
    def velocity_diffusion(self) -> float:
        """2 Gamma_m k_B T / m: growth rate of <v^2> from the thermal force [m^2/s^3]."""
        return 2.0 * self.damping * BOLTZMANN * self.gas.temperature / self.particle.mass

    @property
    def feedback(self) -> FeedbackSettings:
        return FeedbackSettings(self.feedback_gain, self.feedback_enabled_interval,
                                self.feedback_before_protocol, self.feedback_lock_threshold)

    @property
    def sample_period(self) -> float:
        return 1.0 / self.sample_rate

    @property
    def sample_count(self) -> int:
        return int(math.floor(self.duration * self.sample_rate + 1e-9)) + 1

    def feedback_active(self, t: float) -> bool:
        """Whether the cold-damping term is switched on at time t."""
        if self.feedback_gain == 0:
            return False
        if self.feedback_before_protocol and t < self.schedule.start_time:
            return True
        start, stop = self.feedback_enabled_interval
        return start <= t < stop

    def with_overrides(self, **changes) -> 'SimConfig':
        return replace(self, **changes)

    @classmethod
    def published_defaults(cls, duration: float = 8e-3, seed: int = 20240917) -> 'SimConfig':
        """1000 pulses at S = 0.9, 3e-7 mbar, 4.18 mK start, feedback back on after the protocol."""
        trap = published_trap()
        schedule = ModulationSchedule.from_depth(0.9, trap.angular_frequency, 1000, 0.0)
        return cls(
            particle=published_particle(),
            gas=published_gas(3e-7),
            trap=trap,
            schedule=schedule,
            time_step=default_time_step(trap),
            duration=duration,
            sample_rate=DEFAULT_SAMPLE_RATE,
            seed=seed,
            initial_state=ThermalInitial(4.18e-3),
            feedback_gain=DEFAULT_FEEDBACK_GAIN,
            feedback_enabled_interval=(schedule.end_time, math.inf),
            feedback_before_protocol=True,
        )
