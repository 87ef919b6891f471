#!/usr/bin/env python3

"""
Physical Specifications

Immutable descriptions of the particle, the residual gas and the optical
trap. Invariants are enforced at construction; every derived quantity is a
property so the objects stay plain values that can be shared between
threads.
"""

import math
from dataclasses import dataclass
from enum import Enum

from ..functional.errors import ValidationError
from .constants import AIR_MOLECULE_MASS, mbar_to_pa


class TrapModel(Enum):
    """Axial force law of the trap"""
    HARMONIC = "harmonic"
    GAUSSIAN_AXIAL = "gaussian-axial"

    @classmethod
    def parse(cls, text: str) -> 'TrapModel':
        for model in cls:
            if model.value == text.strip().lower():
                return model
        raise ValidationError(
            f"trap model must be one of {[m.value for m in cls]}", key="trap.model", value=text
        )


def _require(condition: bool, invariant: str, key: str, value: float) -> None:
    if not condition:
        raise ValidationError(invariant, key=key, value=value)


@dataclass(frozen=True)
class ParticleSpec:
    """Silica sphere: radius [m], density [kg/m^3], refractive index n_p"""
    radius: float
    density: float = 1800.0
    refractive_index: float = 1.44

    def __post_init__(self):
        _require(self.radius > 0, "radius > 0", "particle.radius_m", self.radius)
        _require(self.density > 0, "density > 0", "particle.density_kg_m3", self.density)
        _require(self.refractive_index >= 1, "refractive_index >= 1",
                 "particle.refractive_index", self.refractive_index)

    @property
    def mass(self) -> float:
        return 4.0 * math.pi * self.radius ** 3 * self.density / 3.0


@dataclass(frozen=True)
class GasEnvironment:
    """Residual gas: pressure [Pa], temperature [K], molecular mass [kg]"""
    pressure: float
    temperature: float = 300.0
    molecular_mass: float = AIR_MOLECULE_MASS

    def __post_init__(self):
        _require(self.pressure >= 0, "pressure >= 0", "gas.pressure_mbar", self.pressure)
        _require(self.temperature >= 0, "temperature >= 0", "gas.temperature_k", self.temperature)
        _require(self.molecular_mass > 0, "molecular_mass > 0",
                 "gas.molecular_mass_kg", self.molecular_mass)

    @classmethod
    def from_mbar(cls, pressure_mbar: float, temperature: float = 300.0,
                  molecular_mass: float = AIR_MOLECULE_MASS) -> 'GasEnvironment':
        return cls(mbar_to_pa(pressure_mbar), temperature, molecular_mass)


@dataclass(frozen=True)
class TrapSpec:
    """
    Optical trap along the beam axis.

    The trap strength is parametrized by the measured angular frequency
    omega_z; the beam geometry (waist, wavelength) only sets the Rayleigh
    range that scales the Gaussian-axial non-linearity.
    """
    angular_frequency: float
    medium_index: float = 1.0
    waist_radius: float = 0.5e-6
    wavelength: float = 1.55e-6
    model: TrapModel = TrapModel.HARMONIC

    def __post_init__(self):
        _require(self.angular_frequency > 0, "angular_frequency > 0",
                 "trap.f_z_hz", self.angular_frequency)
        _require(self.medium_index >= 1, "medium_index >= 1", "trap.medium_index", self.medium_index)
        _require(self.wavelength > 0, "wavelength > 0", "trap.wavelength_m", self.wavelength)
        if self.model is TrapModel.GAUSSIAN_AXIAL:
            _require(self.waist_radius > 0, "waist_radius > 0 when model = gaussian-axial",
                     "trap.waist_m", self.waist_radius)

    @classmethod
    def from_frequency(cls, f_z_hz: float, **kwargs) -> 'TrapSpec':
        return cls(angular_frequency=2.0 * math.pi * f_z_hz, **kwargs)

    @property
    def frequency_hz(self) -> float:
        return self.angular_frequency / (2.0 * math.pi)

    @property
    def rayleigh_range(self) -> float:
        """z_R = pi w0^2 / lambda"""
        return math.pi * self.waist_radius ** 2 / self.wavelength

    def relative_index(self, particle: ParticleSpec) -> float:
        return particle.refractive_index / self.medium_index

    def with_model(self, model: TrapModel) -> 'TrapSpec':
        return TrapSpec(self.angular_frequency, self.medium_index, self.waist_radius,
                        self.wavelength, model)


@dataclass(frozen=True)
class PhaseSpacePoint:
    """(z [m], v [m/s]); momentum is m * v."""
    position: float
    velocity: float

    def __post_init__(self):
        if not (math.isfinite(self.position) and math.isfinite(self.velocity)):
            raise ValidationError("phase-space point must be finite",
                                  value=(self.position, self.velocity))

    def momentum(self, mass: float) -> float:
        return mass * self.velocity


def published_particle() -> ParticleSpec:
    """200 nm diameter silica sphere."""
    return ParticleSpec(radius=1.0e-7, density=1800.0, refractive_index=1.44)


def published_gas(pressure_mbar: float = 3e-7) -> GasEnvironment:
    return GasEnvironment.from_mbar(pressure_mbar, temperature=300.0)


def published_trap(model: TrapModel = TrapModel.GAUSSIAN_AXIAL) -> TrapSpec:
    return TrapSpec.from_frequency(77.6e3, medium_index=1.0, waist_radius=0.5e-6,
                                   wavelength=1.55e-6, model=model)
