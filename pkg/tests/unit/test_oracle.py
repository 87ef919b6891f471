#!/usr/bin/env python3

"""
Oracle Unit Tests

Closed-form maps, process noise and covariance propagation through a
pulse schedule.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.linalg import expm

from nanoexpand.functional.errors import ValidationError
from nanoexpand.oracle import (
    CovarianceState,
    covariance_columns,
    growth_constants,
    initial_covariance,
    predicted_expansion_db,
    process_noise,
    propagate,
    propagate_schedule,
    pulse_map,
    sample_linear_trajectory,
    segment_map,
    thermal_covariance,
)
from nanoexpand.integrator import trajectory_rng
from nanoexpand.physics import position_variance_at

from tests.test_utils import explicit_start, linear_sim_config


def _generator(omega, gamma):
    return np.array([[0.0, 1.0], [-omega ** 2, -gamma]])


@pytest.mark.oracle
class TestSegmentMap:
    """exp(A dt) in all damping regimes"""

    @pytest.mark.parametrize("omega,gamma", [
        (4.9e5, 0.0),
        (4.9e5, 1.4e5),
        (1e5, 2e5),          # critically damped
        (1e5, 5e5),          # overdamped
    ])
    def test_matches_matrix_exponential(self, omega, gamma):
        """Test the closed form agrees with scipy.linalg.expm"""
        dt = 3.3e-6
        expected = expm(_generator(omega, gamma) * dt)
        assert np.allclose(segment_map(omega, gamma, dt), expected, rtol=1e-9, atol=1e-12 * np.max(np.abs(expected)))

    def test_determinant_is_damping(self):
        """Test det exp(A dt) = exp(-gamma dt)"""
        assert np.linalg.det(segment_map(4.9e5, 1e4, 2e-5)) == pytest.approx(math.exp(-0.2), rel=1e-10)

    def test_zero_time_is_identity(self):
        """Test exp(0) = I"""
        assert np.array_equal(segment_map(4.9e5, 10.0, 0.0), np.eye(2))

    def test_negative_time_rejected(self):
        """Test dt < 0 is rejected"""
        with pytest.raises(ValidationError):
            segment_map(1.0, 0.0, -1.0)


@pytest.mark.oracle
class TestPulseMap:
    """One low-high pulse"""

    def test_composition_of_quarter_periods(self, omega_z):
        """Test quarter period at low then high stiffness equals diag(-sqrt S, -1/sqrt S)"""
        depth = 0.9
        tau_high = math.pi / (2 * omega_z)
        tau_low = tau_high / math.sqrt(depth)
        composed = segment_map(omega_z, 0.0, tau_high) @ segment_map(omega_z * math.sqrt(depth), 0.0, tau_low)
        # compare in (z, v/omega) units so every entry is O(1)
        scale = np.diag([1.0, 1.0 / omega_z])
        unscale = np.diag([1.0, omega_z])
        assert np.allclose(scale @ composed @ unscale, scale @ pulse_map(depth, omega_z) @ unscale, atol=1e-12)

    def test_diagonal_entries(self, omega_z):
        """Test the published pulse map entries"""
        matrix = pulse_map(0.9, omega_z)
        assert matrix[0, 0] == pytest.approx(-math.sqrt(0.9))
        assert matrix[1, 1] == pytest.approx(-1 / math.sqrt(0.9))
        assert matrix[0, 1] == 0.0 and matrix[1, 0] == 0.0


@pytest.mark.oracle
class TestProcessNoise:
    """Accumulated noise covariance Q(dt)"""

    @pytest.mark.parametrize("omega,gamma", [(4.9e5, 1.4e5), (4.9e5, 10.0), (1e5, 5e5), (0.0, 1e4), (0.0, 0.0)])
    def test_matches_quadrature(self, omega, gamma):
        """Test Q equals the integral of exp(A u) diag(0, D) exp(A u)^T"""
        diffusion, dt = 2.0, 4e-6

        def entry(u, i, j):
            m = expm(_generator(omega, gamma) * u)
            return diffusion * m[i, 1] * m[j, 1]

        expected = np.array([[quad(entry, 0, dt, args=(i, j), epsabs=0, epsrel=1e-10)[0] for j in range(2)]
                             for i in range(2)])
        assert np.allclose(process_noise(omega, gamma, diffusion, dt), expected, rtol=1e-6, atol=0.0)

    def test_positive_semidefinite(self):
        """Test Q is symmetric and PSD"""
        q = process_noise(4.9e5, 8.7e-3, 3.2e-5, 1e-3)
        assert q[0, 1] == q[1, 0]
        assert np.all(np.linalg.eigvalsh(q) >= -1e-12 * np.max(np.abs(q)))

    def test_no_diffusion(self):
        """Test D = 0 gives no noise"""
        assert not np.any(process_noise(4.9e5, 10.0, 0.0, 1e-6))


@pytest.mark.oracle
class TestCovarianceState:
    """Gaussian state container"""

    def test_rejects_invalid_covariance(self):
        """Test negative variances and asymmetric matrices are rejected"""
        with pytest.raises(ValidationError):
            CovarianceState.centered(-1.0, 0.0, 1.0)
        with pytest.raises(ValidationError):
            CovarianceState(np.zeros(2), np.array([[1.0, 0.5], [0.2, 1.0]]))
        with pytest.raises(ValidationError):
            CovarianceState.centered(1.0, 2.0, 1.0)

    def test_thermal_state_is_stationary(self, particle, harmonic_trap):
        """Test a thermal state at the gas temperature stays put"""
        gamma, temperature = 1.4465e5, 300.0
        diffusion = 2.0 * gamma * 1.380649e-23 * temperature / particle.mass
        state = thermal_covariance(temperature, harmonic_trap, particle)
        evolved = propagate(state, harmonic_trap.angular_frequency, gamma, diffusion, 1e-5)
        assert np.allclose(evolved.covariance, state.covariance, rtol=1e-9,
                           atol=1e-9 * state.covariance[0, 0])

    def test_phase_space_area_preserved_without_damping(self, omega_z):
        """Test undamped maps keep the ellipse area"""
        state = CovarianceState.centered(1e-18, 0.0, (2 * omega_z * 1e-9) ** 2)
        mapped = state.mapped(pulse_map(0.9, omega_z))
        assert mapped.phase_space_area(omega_z) == pytest.approx(state.phase_space_area(omega_z), rel=1e-12)

    def test_major_axis(self, omega_z):
        """Test the major axis of an axis-aligned ellipse"""
        state = CovarianceState.centered(1e-18, 0.0, (3 * omega_z * 1e-9) ** 2)
        assert state.major_axis_sigma(omega_z) == pytest.approx(3e-9)


@pytest.mark.oracle
class TestGrowth:
    """Analytic growth of the pulse train"""

    def test_db_per_pulse(self):
        """Test 10 log10(1/sqrt(0.9)) = 0.22879 dB per pulse"""
        assert predicted_expansion_db(1, 0.9) == pytest.approx(0.22879, rel=1e-4)

    def test_total_expansion(self):
        """Test 124 pulses give 28.4 dB"""
        assert predicted_expansion_db(124, 0.9) == pytest.approx(28.4, abs=0.05)

    def test_constants(self, omega_z):
        """Test tau_amp = 125.6 us and tau_var = tau_amp / 2"""
        constants = growth_constants(0.9, omega_z)
        assert constants.tau_amp == pytest.approx(125.6e-6, rel=1e-3)
        assert constants.tau_var == pytest.approx(62.8e-6, rel=1e-3)
        assert constants.as_dict()["db_per_pulse"] == pytest.approx(0.22879, rel=1e-4)

    def test_unit_depth_never_grows(self, omega_z):
        """Test S = 1 gives zero gain and infinite time constants"""
        constants = growth_constants(1.0, omega_z)
        assert constants.db_per_pulse == 0.0
        assert math.isinf(constants.tau_amp)

    def test_rejects_negative_pulses(self):
        """Test n < 0 is rejected"""
        with pytest.raises(ValidationError):
            predicted_expansion_db(-1, 0.9)


@pytest.mark.oracle
class TestPropagateSchedule:
    """Exact propagation along a run configuration"""

    def test_pulse_boundaries_follow_pulse_map(self):
        """Test the covariance after n pulses is P^n Sigma (P^n)^T"""
        config = linear_sim_config(pulses=10, duration=1e-4)
        state = initial_covariance(config)
        period = config.schedule.pulse_period
        states = propagate_schedule(state, config, [0.0, 10 * period])
        power = np.linalg.matrix_power(pulse_map(0.9, config.trap.angular_frequency), 10)
        expected = power @ state.covariance @ power.T
        scale = math.sqrt(expected[0, 0] * expected[1, 1])
        assert np.allclose(states[1].covariance, expected, rtol=1e-9, atol=1e-9 * scale)

    def test_major_axis_grows_by_db_per_pulse(self):
        """Test sigma_z sampled at low-to-high switches grows 0.2288 dB per pulse"""
        config = linear_sim_config(pulses=40, duration=4e-4)
        s = config.schedule
        times = s.tau_low + np.arange(1, 30) * s.pulse_period
        sigma_zz, _, _ = covariance_columns(propagate_schedule(initial_covariance(config), config, times))
        per_pulse = 10 * np.log10(np.sqrt(sigma_zz[1:] / sigma_zz[:-1]))
        assert np.allclose(per_pulse, 0.22879, rtol=1e-4)

    def test_explicit_start_has_zero_covariance(self):
        """Test a deterministic start propagates its mean only"""
        config = linear_sim_config(initial=explicit_start(1e-9, 0.0))
        state = initial_covariance(config)
        period = 2 * math.pi / config.trap.angular_frequency
        later = propagate_schedule(state, config, [period])[0]
        assert np.allclose(later.mean, [1e-9, 0.0], atol=1e-18)
        assert not np.any(later.covariance)

    def test_thermalization(self):
        """Test a cold start relaxes to the gas temperature"""
        config = linear_sim_config(pressure_mbar=5.0, duration=1e-3)
        final = propagate_schedule(initial_covariance(config), config, [1e-3])[0]
        expected = position_variance_at(300.0, config.trap, config.particle)
        assert final.covariance[0, 0] == pytest.approx(expected, rel=1e-6)

    def test_times_must_ascend(self):
        """Test unordered times are rejected"""
        config = linear_sim_config()
        with pytest.raises(ValidationError):
            propagate_schedule(initial_covariance(config), config, [2e-6, 1e-6])
        assert propagate_schedule(initial_covariance(config), config, []) == []


@pytest.mark.oracle
class TestExactSampling:
    """Exact discrete-time trajectories"""

    def test_stationary_variance(self, particle, harmonic_trap):
        """Test an exactly sampled thermal record has the equipartition variance"""
        gamma = 1.4465e5
        diffusion = 2.0 * gamma * 1.380649e-23 * 300.0 / particle.mass
        z, v = sample_linear_trajectory(harmonic_trap.angular_frequency, gamma, diffusion, 5e-7, 400001,
                                        trajectory_rng(3, 0))
        assert np.var(z) == pytest.approx(position_variance_at(300.0, harmonic_trap, particle), rel=0.05)
        assert v.shape == z.shape

    def test_explicit_initial_without_noise(self, omega_z):
        """Test the noise-free record is the deterministic oscillation"""
        from nanoexpand.physics import PhaseSpacePoint

        period = 1e-7
        z, _ = sample_linear_trajectory(omega_z, 0.0, 0.0, period, 50, trajectory_rng(0, 0),
                                        initial=PhaseSpacePoint(1e-9, 0.0))
        t = np.arange(50) * period
        assert np.allclose(z, 1e-9 * np.cos(omega_z * t), rtol=0, atol=1e-20)

    def test_stationary_start_needs_damping(self, omega_z):
        """Test a stationary draw is impossible without damping"""
        with pytest.raises(ValidationError):
            sample_linear_trajectory(omega_z, 0.0, 1.0, 1e-6, 10, trajectory_rng(0, 0))
