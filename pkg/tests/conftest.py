#!/usr/bin/env python3

"""
Test Configuration and Fixtures

Shared physical specifications, small simulation configurations and
scratch directories for unit, integration and end-to-end tests.
"""

import math
import shutil
import tempfile
from pathlib import Path

import pytest

from tests.test_utils import linear_sim_config, write_config_file, SMALL_RUN_CONFIG

from nanoexpand.cli import parse_config
from nanoexpand.physics import (
    GasEnvironment,
    TrapModel,
    TrapSpec,
    published_particle,
    published_trap,
)


@pytest.fixture
def temp_dir():
    """Create temporary directory for tests"""
    temp_path = tempfile.mkdtemp(prefix="nanoexpand_test_")
    yield Path(temp_path)
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def particle():
    """200 nm silica sphere"""
    return published_particle()


@pytest.fixture
def harmonic_trap():
    """77.6 kHz axial trap with a linear restoring force"""
    return published_trap(TrapModel.HARMONIC)


@pytest.fixture
def gaussian_trap():
    """77.6 kHz axial trap with the Gaussian-beam force law"""
    return published_trap(TrapModel.GAUSSIAN_AXIAL)


@pytest.fixture
def omega_z(harmonic_trap: TrapSpec) -> float:
    return harmonic_trap.angular_frequency


@pytest.fixture
def vacuum() -> GasEnvironment:
    """No gas: no damping and no thermal force"""
    return GasEnvironment(pressure=0.0)


@pytest.fixture
def noiseless_config():
    """Undamped noise-free harmonic run without pulses"""
    return linear_sim_config(pressure_mbar=0.0, pulses=0, duration=1e-4)


@pytest.fixture
def published_config():
    """Bundled configuration with the published parameter set"""
    return parse_config("paper-defaults")


@pytest.fixture
def small_config_path(temp_dir) -> Path:
    """Config file for a short, cheap CLI run"""
    return write_config_file(Path(temp_dir) / "small.conf", SMALL_RUN_CONFIG)


@pytest.fixture
def pulse_period(omega_z) -> float:
    """tau_low + tau_high at S = 0.9"""
    return math.pi / (2.0 * omega_z) * (1.0 + 1.0 / math.sqrt(0.9))


def pytest_collection_modifyitems(config, items):
    """Add markers based on test file location"""
    for item in items:
        path = str(item.fspath)
        if "/unit/" in path or "/property_based/" in path:
            item.add_marker(pytest.mark.unit)
        elif "/integration/" in path:
            item.add_marker(pytest.mark.integration)
        elif "/e2e/" in path:
            item.add_marker(pytest.mark.e2e)
