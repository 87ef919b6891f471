"""
Physics Module

Constants, particle/gas/trap specifications and closed-form force laws.
"""

from .constants import (
    BOLTZMANN,
    HBAR,
    SPEED_OF_LIGHT,
    AIR_MOLECULE_MASS,
    mbar_to_pa,
    pa_to_mbar,
)
from .specs import (
    ParticleSpec,
    GasEnvironment,
    TrapSpec,
    TrapModel,
    PhaseSpacePoint,
    published_particle,
    published_gas,
    published_trap,
)
from .forces import (
    mass_of,
    mean_gas_speed,
    gas_damping_rate,
    polarizability_prefactor,
    trap_depth,
    axial_acceleration,
    axial_force,
    axial_potential,
    noise_force_amplitude,
    position_variance_at,
    velocity_variance_at,
)

__all__ = [
    "BOLTZMANN",
    "HBAR",
    "SPEED_OF_LIGHT",
    "AIR_MOLECULE_MASS",
    "mbar_to_pa",
    "pa_to_mbar",
    "ParticleSpec",
    "GasEnvironment",
    "TrapSpec",
    "TrapModel",
    "PhaseSpacePoint",
    "published_particle",
    "published_gas",
    "published_trap",
    "mass_of",
    "mean_gas_speed",
    "gas_damping_rate",
    "polarizability_prefactor",
    "trap_depth",
    "axial_acceleration",
    "axial_force",
    "axial_potential",
    "noise_force_amplitude",
    "position_variance_at",
    "velocity_variance_at",
]
