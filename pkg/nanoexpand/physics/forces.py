#!/usr/bin/env python3

"""
Closed-form force and rate expressions for the axial mode.

Every function is pure. ``axial_acceleration`` accepts numpy arrays so the
integrator can evaluate a whole batch of trajectories in one call.
"""

import math
from typing import Union

import numpy as np

from .constants import BOLTZMANN, SPEED_OF_LIGHT
from .specs import GasEnvironment, ParticleSpec, TrapModel, TrapSpec

ArrayLike = Union[float, np.ndarray]


def mass_of(particle: ParticleSpec) -> float:
    """m = 4 pi r^3 rho / 3"""
    return particle.mass


def mean_gas_speed(gas: GasEnvironment) -> float:
    """v_gas = sqrt(k_B T / m_gas)"""
    return math.sqrt(BOLTZMANN * gas.temperature / gas.molecular_mass)


def gas_damping_rate(gas: GasEnvironment, particle: ParticleSpec) -> float:
    """Gamma_m = 64 P r^2 / (m v_gas); zero in vacuum or for a frozen gas."""
    speed = mean_gas_speed(gas)
    if gas.pressure == 0 or speed == 0:
        return 0.0
    return 64.0 * gas.pressure * particle.radius ** 2 / (particle.mass * speed)


def polarizability_prefactor(particle: ParticleSpec, trap: TrapSpec) -> float:
    """
    Gradient-force prefactor (2 pi n_m r^3 / c) (n_r^2 - 1)/(n_r^2 + 2),
    so that F(z) = prefactor * dI/dz.
    """
    n_r = trap.relative_index(particle)
    clausius_mossotti = (n_r ** 2 - 1.0) / (n_r ** 2 + 2.0)
    return 2.0 * math.pi * trap.medium_index * particle.radius ** 3 / SPEED_OF_LIGHT * clausius_mossotti


def trap_depth(trap: TrapSpec, particle: ParticleSpec) -> float:
    """U0 = m omega^2 z_R^2 / 2 for the Gaussian-axial profile."""
    return 0.5 * particle.mass * trap.angular_frequency ** 2 * trap.rayleigh_range ** 2


def axial_acceleration(trap: TrapSpec, z: ArrayLike) -> ArrayLike:
    """F(z)/m at full laser power."""
    omega_sq = trap.angular_frequency ** 2
    if trap.model is TrapModel.HARMONIC:
        return -omega_sq * z
    u_sq = (z / trap.rayleigh_range) ** 2
    denominator = (1.0 + u_sq) * (1.0 + u_sq)
    return -omega_sq * z / denominator


def axial_force(trap: TrapSpec, particle: ParticleSpec, z: ArrayLike) -> ArrayLike:
    """
    Harmonic: -m omega^2 z.
    Gaussian-axial: -2 U0 z / (z_R^2 (1 + (z/z_R)^2)^2), which reduces to the
    harmonic value as z -> 0.
    """
    return particle.mass * axial_acceleration(trap, z)


def axial_potential(trap: TrapSpec, particle: ParticleSpec, z: ArrayLike) -> ArrayLike:
    """U(z) with U(0) = 0."""
    if trap.model is TrapModel.HARMONIC:
        return 0.5 * particle.mass * trap.angular_frequency ** 2 * z ** 2
    u_sq = (z / trap.rayleigh_range) ** 2
    return trap_depth(trap, particle) * u_sq / (1.0 + u_sq)


def noise_force_amplitude(gas: GasEnvironment, particle: ParticleSpec, damping: float) -> float:
    """
    sqrt(2 m Gamma k_B T): the stochastic force is amplitude * eta(t) with
    <eta(t) eta(t')> = delta(t - t'). The mass factor makes equipartition exact.
    """
    if damping < 0:
        raise ValueError("damping must be >= 0")
    return math.sqrt(2.0 * particle.mass * damping * BOLTZMANN * gas.temperature)


def position_variance_at(temperature: float, trap: TrapSpec, particle: ParticleSpec) -> float:
    """k_B T / (m omega^2)"""
    return BOLTZMANN * temperature / (particle.mass * trap.angular_frequency ** 2)


def velocity_variance_at(temperature: float, particle: ParticleSpec) -> float:
    """k_B T / m"""
    return BOLTZMANN * temperature / particle.mass
