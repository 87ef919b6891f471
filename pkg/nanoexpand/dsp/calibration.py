"""
Equipartition calibration: a thermal spectrum at a known temperature fixes
the conversion from detector units to meters.
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, Optional

from ..functional.errors import ValidationError
from ..physics import ParticleSpec, TrapSpec, position_variance_at
from .lorentzian import LorentzianFit, LorentzianGuess, lorentzian_fit
from .spectrum import SpectrumEstimate

logger = logging.getLogger(__name__)


def calibration_factor(fitted_area: float, temperature: float, particle: ParticleSpec,
                       trap: TrapSpec) -> float:
    """sqrt(k_B T / (m w^2) / fitted_area): multiply raw samples by it to get meters."""
    if not fitted_area > 0:
        raise ValidationError("fitted_area > 0", value=fitted_area)
    return math.sqrt(position_variance_at(temperature, trap, particle) / fitted_area)


@dataclass(frozen=True)
class CalibrationReport:
    fit: LorentzianFit
    factor: float
    equilibrium_variance: float
    temperature: float

    @property
    def calibrated_variance(self) -> float:
        return self.fit.integrated_area * self.factor ** 2

    def as_dict(self) -> Dict[str, float]:
        return {
            "center_frequency_hz": self.fit.center_frequency,
            "linewidth_per_s": self.fit.linewidth,
            "amplitude": self.fit.amplitude,
            "floor": self.fit.floor,
            "integrated_area": self.fit.integrated_area,
            "residual_norm": self.fit.residual_norm,
            "converged": self.fit.converged,
            "temperature_k": self.temperature,
            "equilibrium_variance_m2": self.equilibrium_variance,
            "calibration_factor": self.factor,
        }


def calibrate_spectrum(spectrum: SpectrumEstimate, temperature: float, particle: ParticleSpec,
                       trap: TrapSpec, initial_guess: Optional[LorentzianGuess] = None) -> CalibrationReport:
    fit = lorentzian_fit(spectrum, initial_guess)
    factor = calibration_factor(fit.integrated_area, temperature, particle, trap)
    logger.info(f"Calibration: f0 = {fit.center_frequency:.1f} Hz, Gamma = {fit.linewidth:.4g} 1/s, "
                f"factor = {factor:.6g}")
    return CalibrationReport(fit, factor, position_variance_at(temperature, trap, particle), temperature)
