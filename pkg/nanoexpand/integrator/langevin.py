#!/usr/bin/env python3

"""
Langevin Integrator

Integrates  dv = [S(t) F(z)/m - (Gamma_m + gamma_fb(t)) v] dt + sqrt(D) dW,
D = 2 Gamma_m k_B T / m, with the symmetric splitting

    B(h/2) A(h/2) O(h) A(h/2) B(h/2)

where B is the velocity kick from S(t) F(z), A the position drift and O the
exact Ornstein-Uhlenbeck update of v under the total damping. Feedback is
cold damping: it enters the O decay but adds no noise.

The time axis is cut at every sample instant, modulation transition and
feedback edge; each interval is split into equal sub-steps no longer than
``time_step``, so S(t) and the feedback state are constant within a step.
"""

import math
import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np
from numpy.random import Generator

from ..functional.errors import NonFiniteState, ValidationError
from ..modulation import schedule_value, schedule_values, transition_times
from ..physics import (
    PhaseSpacePoint,
    ParticleSpec,
    TrapSpec,
    axial_acceleration,
    position_variance_at,
    velocity_variance_at,
)
from .config import ExplicitInitial, SimConfig, ThermalInitial
from .rng import NoiseBuffer, trajectory_rng
from .trajectory import Ensemble, Trajectory

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# breakpoints closer than this fraction of time_step are merged
_MERGE_TOLERANCE = 1e-9


def draw_initial_state(temperature: float, trap: TrapSpec, particle: ParticleSpec,
                       rng: Generator) -> PhaseSpacePoint:
    """Independent zero-mean Gaussians with the thermal variances at ``temperature``."""
    if temperature < 0:
        raise ValidationError("temperature >= 0", key="sim.initial_temperature_k", value=temperature)
    sigma_z = math.sqrt(position_variance_at(temperature, trap, particle))
    sigma_v = math.sqrt(velocity_variance_at(temperature, particle))
    draws = rng.standard_normal(2)
    return PhaseSpacePoint(float(sigma_z * draws[0]), float(sigma_v * draws[1]))


def ou_coefficients(gamma: float, diffusion: float, h: float) -> Tuple[float, float]:
    """(exp(-gamma h), std of the noise increment) for the exact OU velocity update."""
    decay = math.exp(-gamma * h)
    if gamma > 0:
        kick = math.sqrt(diffusion * -math.expm1(-2.0 * gamma * h) / (2.0 * gamma))
    else:
        kick = math.sqrt(diffusion * h)
    return decay, kick


def _baoab(trap: TrapSpec, z: ArrayLike, v: ArrayLike, acc: ArrayLike, depth: float, half: float,
           decay: ArrayLike, kick: ArrayLike, xi: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """One sub-step. ``acc`` is F(z)/m at full power for the incoming z; returned for reuse."""
    v = v + (half * depth) * acc
    z = z + half * v
    v = decay * v + kick * xi
    z = z + half * v
    acc = axial_acceleration(trap, z)
    v = v + (half * depth) * acc
    return z, v, acc


def _total_damping(config: SimConfig, t: float, z: float) -> float:
    gamma = config.damping
    if config.feedback_active(t):
        threshold = config.feedback_lock_threshold
        if threshold == 0 or abs(z) < threshold:
            gamma += config.feedback_gain
    return gamma


def step(state: PhaseSpacePoint, config: SimConfig, t: float, dt: float,
         rng: Generator) -> PhaseSpacePoint:
    """
    Advance one trajectory by dt. The caller splits steps at modulation
    transitions; a step straddling one is rejected.
    """
    if not 0 < dt <= config.time_step * (1.0 + 1e-12):
        raise ValidationError("0 < dt <= time_step", key="sim.time_step_s", value=dt)
    edges = transition_times(config.schedule)
    tolerance = _MERGE_TOLERANCE * config.time_step
    if np.any((edges > t + tolerance) & (edges < t + dt - tolerance)):
        raise ValidationError("step must not straddle a modulation transition", value=(t, t + dt))

    midpoint = t + 0.5 * dt
    depth = schedule_value(config.schedule, midpoint)
    decay, kick = ou_coefficients(_total_damping(config, midpoint, state.position),
                                  config.velocity_diffusion, dt)
    xi = float(rng.standard_normal()) if kick > 0 else 0.0

    acc = axial_acceleration(config.trap, state.position)
    with np.errstate(over="ignore", invalid="ignore"):
        z, v, _ = _baoab(config.trap, state.position, state.velocity, acc, depth, 0.5 * dt,
                         decay, kick, xi)
    if not (math.isfinite(z) and math.isfinite(v)):
        raise NonFiniteState(t + dt)
    return PhaseSpacePoint(z, v)


@dataclass(frozen=True)
class IntegrationGrid:
    """
    Breakpoints of the piecewise-constant dynamics. Interval j runs from
    breakpoints[j] to breakpoints[j + 1] in substeps[j] equal steps at
    stiffness depths[j], with feedback switched on where feedback_on[j].
    """
    breakpoints: np.ndarray
    is_sample: np.ndarray
    substeps: np.ndarray
    depths: np.ndarray
    feedback_on: np.ndarray

    @property
    def interval_count(self) -> int:
        return int(self.substeps.shape[0])

    @property
    def step_sizes(self) -> np.ndarray:
        return np.diff(self.breakpoints) / self.substeps

    @property
    def total_steps(self) -> int:
        return int(self.substeps.sum())


def integration_grid(config: SimConfig) -> IntegrationGrid:
    sample_times = np.arange(config.sample_count) / config.sample_rate

    events = [transition_times(config.schedule), np.array([config.duration])]
    if config.feedback_gain > 0:
        events.append(np.array(config.feedback_enabled_interval, dtype=float))
        if config.feedback_before_protocol:
            events.append(np.array([config.schedule.start_time]))
    extra = np.concatenate(events)
    extra = extra[np.isfinite(extra) & (extra > 0) & (extra <= config.duration)]

    times = np.concatenate([sample_times, extra])
    flags = np.concatenate([np.ones(sample_times.shape[0], dtype=bool),
                            np.zeros(extra.shape[0], dtype=bool)])
    order = np.argsort(times, kind="stable")
    times, flags = times[order], flags[order]

    new_group = np.ones(times.shape[0], dtype=bool)
    new_group[1:] = np.diff(times) > _MERGE_TOLERANCE * config.time_step
    starts = np.flatnonzero(new_group)
    breakpoints = times[starts]
    is_sample = np.logical_or.reduceat(flags, starts)

    lengths = np.diff(breakpoints)
    substeps = np.maximum(1, np.ceil(lengths / config.time_step - 1e-9)).astype(np.int64)
    midpoints = 0.5 * (breakpoints[:-1] + breakpoints[1:])
    depths = schedule_values(config.schedule, midpoints)
    feedback_on = np.array([config.feedback_active(float(t)) for t in midpoints], dtype=bool)

    return IntegrationGrid(breakpoints, is_sample, substeps, depths, feedback_on)


def _initial_arrays(config: SimConfig, generators: Sequence[Generator]) -> Tuple[np.ndarray, np.ndarray]:
    initial = config.initial_state
    if isinstance(initial, ExplicitInitial):
        z = np.full(len(generators), initial.point.position)
        v = np.full(len(generators), initial.point.velocity)
        return z, v
    if isinstance(initial, ThermalInitial):
        points = [draw_initial_state(initial.temperature, config.trap, config.particle, rng)
                  for rng in generators]
        return (np.array([p.position for p in points]),
                np.array([p.velocity for p in points]))
    raise ValidationError("initial state must be thermal or explicit", key="sim.initial", value=initial)


def simulate_batch(config: SimConfig, indices: Sequence[int],
                   grid: IntegrationGrid = None) -> Ensemble:
    """
    Integrate the trajectories ``indices`` side by side. Only elementwise
    arithmetic touches the state arrays, so every row is bit-identical to
    the same trajectory integrated alone.
    """
    indices = np.asarray(indices, dtype=np.int64)
    grid = grid if grid is not None else integration_grid(config)
    generators = [trajectory_rng(config.seed, int(i)) for i in indices]
    z, v = _initial_arrays(config, generators)

    sample_count = int(np.count_nonzero(grid.is_sample))
    positions = np.empty((indices.shape[0], sample_count))
    velocities = np.empty_like(positions)
    column = 0
    if grid.is_sample[0]:
        positions[:, 0], velocities[:, 0] = z, v
        column = 1

    diffusion = config.velocity_diffusion
    noise = NoiseBuffer(generators) if diffusion > 0 else None
    zeros = np.zeros(indices.shape[0])
    lock = config.feedback.uses_lock
    acc = axial_acceleration(config.trap, z)
    step_sizes = grid.step_sizes

    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(grid.interval_count):
            h = float(step_sizes[j])
            half = 0.5 * h
            depth = float(grid.depths[j])
            decay_off, kick_off = ou_coefficients(config.damping, diffusion, h)
            if grid.feedback_on[j]:
                decay_on, kick_on = ou_coefficients(config.damping + config.feedback_gain, diffusion, h)
            else:
                decay_on, kick_on = decay_off, kick_off
            decay, kick = decay_on, kick_on

            for _ in range(int(grid.substeps[j])):
                if lock and grid.feedback_on[j]:
                    locked = np.abs(z) < config.feedback_lock_threshold
                    decay = np.where(locked, decay_on, decay_off)
                    kick = np.where(locked, kick_on, kick_off)
                xi = noise.next() if noise is not None else zeros
                z, v, acc = _baoab(config.trap, z, v, acc, depth, half, decay, kick, xi)

            finite = np.isfinite(z) & np.isfinite(v)
            if not finite.all():
                bad = int(indices[np.argmin(finite)])
                raise NonFiniteState(float(grid.breakpoints[j + 1]), bad)
            if grid.is_sample[j + 1]:
                positions[:, column], velocities[:, column] = z, v
                column += 1

    return Ensemble(config.sample_period, positions, velocities, config.seed, indices)


def simulate(config: SimConfig) -> Trajectory:
    """Single trajectory; identical to trajectory 0 of an ensemble with the same seed."""
    logger.debug(f"Simulating {config.duration:.3e} s at dt = {config.time_step:.3e} s")
    return simulate_batch(config, [0]).trajectory(0)
