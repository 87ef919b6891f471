#!/usr/bin/env python3

"""
Lorentzian Resonance Fit

Model of the one-sided position spectrum of a damped oscillator

    S(f) = a / ((w0^2 - w^2)^2 + Gamma^2 w^2) + b,    w = 2 pi f

fitted by Levenberg-Marquardt on parameters scaled by the initial guess.
The area under the resonant part, in the spectrum's own units, is the
mode variance a / (4 Gamma w0^2).
"""

import math
import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import least_squares

from ..functional.errors import DegenerateSpectrum, NoConvergence, ValidationError
from .spectrum import SpectrumEstimate

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 200
PARAMETER_TOLERANCE = 1e-8
MIN_PEAK_BINS = 5
FLOOR_FACTOR = 10.0


@dataclass(frozen=True)
class LorentzianGuess:
    center_frequency: float
    linewidth: float
    amplitude: Optional[float] = None
    floor: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.center_frequency) and self.center_frequency > 0):
            raise ValidationError("initial center_frequency finite and > 0", value=self.center_frequency)
        if not (math.isfinite(self.linewidth) and self.linewidth > 0):
            raise ValidationError("initial linewidth finite and > 0", value=self.linewidth)


@dataclass(frozen=True)
class LorentzianFit:
    center_frequency: float   # f0 [Hz]
    linewidth: float          # Gamma [rad/s]
    amplitude: float          # a [units^2/Hz * rad^4/s^4]
    floor: float              # b [units^2/Hz]
    integrated_area: float    # [units^2]
    residual_norm: float
    iterations: int = 0
    converged: bool = True

    @property
    def angular_frequency(self) -> float:
        return 2.0 * math.pi * self.center_frequency

    @property
    def quality_factor(self) -> float:
        return self.angular_frequency / self.linewidth


def lorentzian_model(frequencies: np.ndarray, amplitude: float, center_frequency: float,
                     linewidth: float, floor: float = 0.0) -> np.ndarray:
    w = 2.0 * np.pi * np.asarray(frequencies, dtype=float)
    w0 = 2.0 * math.pi * center_frequency
    return amplitude / ((w0 * w0 - w * w) ** 2 + (linewidth * w) ** 2) + floor


def lorentzian_area(amplitude: float, center_frequency: float, linewidth: float) -> float:
    """Integral over f >= 0 of the resonant part: (a pi / (2 Gamma w0^2)) / (2 pi)."""
    w0 = 2.0 * math.pi * center_frequency
    return amplitude * math.pi / (2.0 * linewidth * w0 * w0) / (2.0 * math.pi)


def _check_resolvable(spectrum: SpectrumEstimate) -> None:
    noise_floor = float(np.median(spectrum.density))
    above = int(np.count_nonzero(spectrum.density > FLOOR_FACTOR * noise_floor))
    if above < MIN_PEAK_BINS:
        raise DegenerateSpectrum(
            f"only {above} bins exceed {FLOOR_FACTOR:g} x the median density; "
            f"at least {MIN_PEAK_BINS} are needed"
        )


def estimate_initial_guess(spectrum: SpectrumEstimate) -> LorentzianGuess:
    """Peak bin for f0, half-maximum width for Gamma, zero floor."""
    density = spectrum.density
    k = 1 + int(np.argmax(density[1:]))
    peak = float(density[k])
    half = 0.5 * peak
    lo = k
    while lo > 0 and density[lo - 1] >= half:
        lo -= 1
    hi = k
    while hi < density.shape[0] - 1 and density[hi + 1] >= half:
        hi += 1
    width_hz = max((hi - lo + 1) * spectrum.resolution, spectrum.resolution)
    center = float(spectrum.frequencies[k])
    linewidth = 2.0 * math.pi * width_hz
    w0 = 2.0 * math.pi * center
    return LorentzianGuess(center, linewidth, peak * (linewidth * w0) ** 2, 0.0)


def lorentzian_fit(spectrum: SpectrumEstimate, initial_guess: Optional[LorentzianGuess] = None) -> LorentzianFit:
    """
    Least-squares fit of the resonance. Raises NoConvergence carrying the
    best iterate when the iteration budget runs out.
    """
    _check_resolvable(spectrum)
    guess = initial_guess if initial_guess is not None else estimate_initial_guess(spectrum)
    if guess.amplitude is None:
        w0 = 2.0 * math.pi * guess.center_frequency
        peak = float(np.max(spectrum.density))
        guess = replace(guess, amplitude=peak * (guess.linewidth * w0) ** 2)

    f = spectrum.frequencies
    data = spectrum.density
    w = 2.0 * np.pi * f
    data_scale = float(np.max(data))
    scales = np.array([guess.amplitude, 2.0 * math.pi * guess.center_frequency, guess.linewidth, data_scale])

    def unpack(x: np.ndarray):
        return x * scales

    def residuals(x: np.ndarray) -> np.ndarray:
        a, w0, gamma, b = unpack(x)
        denominator = (w0 * w0 - w * w) ** 2 + (gamma * w) ** 2
        return (a / denominator + b - data) / data_scale

    def jacobian(x: np.ndarray) -> np.ndarray:
        a, w0, gamma, _ = unpack(x)
        detuning = w0 * w0 - w * w
        denominator = detuning ** 2 + (gamma * w) ** 2
        columns = np.empty((w.shape[0], 4))
        columns[:, 0] = 1.0 / denominator
        columns[:, 1] = -a * 4.0 * w0 * detuning / denominator ** 2
        columns[:, 2] = -a * 2.0 * gamma * w * w / denominator ** 2
        columns[:, 3] = 1.0
        return columns * scales / data_scale

    x0 = np.array([1.0, 1.0, 1.0, guess.floor / data_scale])
    result = least_squares(residuals, x0, jac=jacobian, method="lm", xtol=PARAMETER_TOLERANCE,
                           ftol=1e-12, gtol=1e-12, max_nfev=MAX_ITERATIONS)

    a, w0, gamma, b = unpack(result.x)
    w0, gamma = abs(w0), abs(gamma)
    model = a / ((w0 * w0 - w * w) ** 2 + (gamma * w) ** 2) + b
    residual_norm = float(np.linalg.norm(model - data) / np.linalg.norm(data))
    center = w0 / (2.0 * math.pi)
    converged = result.status > 0 and a > 0 and gamma > 0 and center > 0
    fit = LorentzianFit(
        center_frequency=center,
        linewidth=gamma,
        amplitude=float(a),
        floor=float(b),
        integrated_area=max(lorentzian_area(a, center, gamma), 0.0) if center > 0 and gamma > 0 else 0.0,
        residual_norm=residual_norm,
        iterations=int(result.nfev),
        converged=converged,
    )
    if not converged:
        raise NoConvergence(f"Lorentzian fit did not converge ({result.message})", best_fit=fit)
    logger.debug(f"Lorentzian fit: f0 = {center:.6g} Hz, Gamma = {gamma:.6g} 1/s, "
                 f"residual {residual_norm:.3e} after {result.nfev} evaluations")
    return fit
