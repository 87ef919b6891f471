"""Welch power spectral density."""

from dataclasses import dataclass

import numpy as np
from scipy import signal

from ..functional.errors import TooShort, ValidationError

DEFAULT_SEGMENT_LENGTH = 16384
DEFAULT_OVERLAP = 0.5


@dataclass(frozen=True)
class SpectrumEstimate:
    """One-sided density [units^2/Hz]; sum(density) * resolution ~ variance."""
    frequencies: np.ndarray
    density: np.ndarray
    resolution: float
    window: str
    segment_length: int
    averages: int = 1

    def __post_init__(self):
        if self.frequencies.shape != self.density.shape:
            raise ValidationError("frequencies and density have equal length")
        if np.any(np.diff(self.frequencies) <= 0):
            raise ValidationError("frequencies strictly increasing")
        if np.any(self.density < 0):
            raise ValidationError("density >= 0")

    def total_power(self) -> float:
        return float(np.sum(self.density) * self.resolution)

    def peak_frequency(self) -> float:
        """Frequency of the largest non-DC bin."""
        return float(self.frequencies[1:][np.argmax(self.density[1:])])

    def band(self, low: float, high: float) -> 'SpectrumEstimate':
        keep = (self.frequencies >= low) & (self.frequencies <= high)
        return SpectrumEstimate(self.frequencies[keep], self.density[keep], self.resolution,
                                self.window, self.segment_length, self.averages)


def welch_psd(samples: np.ndarray, sample_rate: float, segment_length: int = DEFAULT_SEGMENT_LENGTH,
              overlap: float = DEFAULT_OVERLAP) -> SpectrumEstimate:
    """Hann-windowed averaged periodogram, one-sided, density scaling."""
    samples = np.asarray(samples, dtype=float)
    if segment_length < 2:
        raise TooShort(f"segment_length must be >= 2, got {segment_length}")
    if segment_length > samples.shape[0]:
        raise TooShort(f"segment_length {segment_length} exceeds signal length {samples.shape[0]}")
    if not 0 <= overlap < 1:
        raise ValidationError("0 <= overlap < 1", key="calibration.overlap", value=overlap)

    noverlap = int(overlap * segment_length)
    frequencies, density = signal.welch(
        samples, fs=sample_rate, window="hann", nperseg=segment_length, noverlap=noverlap,
        detrend="constant", return_onesided=True, scaling="density",
    )
    step = segment_length - noverlap
    averages = 1 + (samples.shape[0] - segment_length) // step
    return SpectrumEstimate(frequencies, np.maximum(density, 0.0), sample_rate / segment_length,
                            "hann", segment_length, averages)
