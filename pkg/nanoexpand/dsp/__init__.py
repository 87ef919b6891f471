"""
DSP Module

Band-pass filtering, differentiation, Welch spectra, Lorentzian fits and
equipartition calibration.
"""

from .filters import design_bandpass, bandpass, bandpass_response, differentiate
from .spectrum import SpectrumEstimate, welch_psd, DEFAULT_SEGMENT_LENGTH, DEFAULT_OVERLAP
from .lorentzian import (
    LorentzianGuess,
    LorentzianFit,
    lorentzian_model,
    lorentzian_area,
    estimate_initial_guess,
    lorentzian_fit,
)
from .calibration import calibration_factor, CalibrationReport, calibrate_spectrum

__all__ = [
    "design_bandpass",
    "bandpass",
    "bandpass_response",
    "differentiate",
    "SpectrumEstimate",
    "welch_psd",
    "DEFAULT_SEGMENT_LENGTH",
    "DEFAULT_OVERLAP",
    "LorentzianGuess",
    "LorentzianFit",
    "lorentzian_model",
    "lorentzian_area",
    "estimate_initial_guess",
    "lorentzian_fit",
    "calibration_factor",
    "CalibrationReport",
    "calibrate_spectrum",
]
