#!/usr/bin/env python3

"""
Test Utilities

Builders for small simulation configurations, synthetic signals and
trajectory files, plus Result assertions.
"""

import math
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from nanoexpand.functional.result_monad import Result
from nanoexpand.integrator import (
    ExplicitInitial,
    InitialState,
    SimConfig,
    ThermalInitial,
    default_time_step,
)
from nanoexpand.modulation import ModulationSchedule
from nanoexpand.physics import (
    GasEnvironment,
    PhaseSpacePoint,
    TrapModel,
    published_particle,
    published_trap,
)

# Short harmonic run with stored trajectories; cheap enough for every CLI test.
SMALL_RUN_CONFIG = """\
# 20 pulses on a harmonic trap, 0.2 ms at 2 MHz
trap.model = harmonic
modulation.depth = 0.9
modulation.pulses = 20
sim.duration_s = 2e-4
sim.sample_rate_hz = 2e6
sim.seed = 1234
sim.ensemble = 6
sim.workers = 2
sim.batch_size = 4
sim.keep_trajectories = true
analysis.smoothing_window = 11
analysis.growth_window_s = 2e-5, 1.2e-4
analysis.histogram_times_s = 0.0, 1e-4
analysis.histogram_bins = 5
calibration.segment_length = 4096
calibration.synthetic_duration_s = 0.05
calibration.synthetic_scale = 2.5e-3
"""


def write_config_file(path: Path, text: str) -> Path:
    """Write a configuration file and return its path"""
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path


def linear_sim_config(pressure_mbar: float = 0.0, gas_temperature: float = 300.0, pulses: int = 0,
                      depth: float = 0.9, start_time: float = 0.0, duration: float = 1e-4,
                      sample_rate: Optional[float] = None, time_step: Optional[float] = None,
                      seed: int = 7, initial: Optional[InitialState] = None,
                      model: TrapModel = TrapModel.HARMONIC, **overrides) -> SimConfig:
    """SimConfig around the default particle and trap with everything else switched off by default"""
    trap = published_trap(model)
    time_step = time_step if time_step is not None else default_time_step(trap)
    schedule = ModulationSchedule.from_depth(depth, trap.angular_frequency, pulses, start_time)
    return SimConfig(
        particle=published_particle(),
        gas=GasEnvironment.from_mbar(pressure_mbar, gas_temperature),
        trap=trap,
        schedule=schedule,
        time_step=time_step,
        duration=duration,
        sample_rate=sample_rate if sample_rate is not None else min(2e6, 1.0 / time_step),
        seed=seed,
        initial_state=initial if initial is not None else ThermalInitial(4.18e-3),
        **overrides,
    )


def explicit_start(z: float, v: float) -> ExplicitInitial:
    return ExplicitInitial(PhaseSpacePoint(z, v))


def damped_oscillation(frequency: float, sample_rate: float, n_samples: int, decay: float = 0.0,
                       amplitude: float = 1e-9, phase: float = 0.0) -> np.ndarray:
    """amplitude * exp(-decay t) * cos(2 pi f t + phase)"""
    t = np.arange(n_samples) / sample_rate
    return amplitude * np.exp(-decay * t) * np.cos(2.0 * math.pi * frequency * t + phase)


def write_trajectory_csv(path: Path, sample_period: float, positions: Sequence[float],
                         velocities: Sequence[float]) -> Path:
    """t,z,v file in the layout the simulate command writes"""
    positions = np.asarray(positions, dtype=float)
    times = np.arange(positions.shape[0]) * sample_period
    data = np.column_stack([times, positions, np.asarray(velocities, dtype=float)])
    np.savetxt(path, data, fmt="%.17g", delimiter=",", header="t,z,v", comments="")
    return Path(path)


def read_key_values(path: Path) -> dict:
    """Parse 'key = value' report lines; numbers become floats"""
    values = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if " = " not in line:
            continue
        key, value = line.split(" = ", 1)
        try:
            values[key] = float(value)
        except ValueError:
            values[key] = value
    return values


def assert_result_success(result: Result, message: str = ""):
    """Assert a Result is a Success and return its value"""
    assert result.is_success(), f"{message} expected success, got {result.get_error()!r}"
    return result.get_value()


def assert_result_failure(result: Result, error_type: Optional[type] = None, contains: Optional[str] = None):
    """Assert a Result is a Failure, optionally of a given type or mentioning a text"""
    assert result.is_failure(), f"expected failure, got {result.get_value()!r}"
    error = result.get_error()
    if error_type is not None:
        assert isinstance(error, error_type), f"expected {error_type.__name__}, got {type(error).__name__}"
    if contains is not None:
        assert contains in str(error), f"'{contains}' not in '{error}'"
    return error
