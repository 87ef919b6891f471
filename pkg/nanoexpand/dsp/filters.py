"""
Filtering and differentiation of sampled position records.
"""

import numpy as np
from scipy import signal

from ..functional.errors import InvalidBand, TooShort


def _band_edges(sample_rate: float, center: float, bandwidth: float, order: int):
    low = center - bandwidth / 2.0
    high = center + bandwidth / 2.0
    if order < 1:
        raise InvalidBand(f"filter order must be >= 1, got {order}")
    if bandwidth <= 0:
        raise InvalidBand(f"bandwidth must be > 0, got {bandwidth}")
    if not 0 < low < high < sample_rate / 2.0:
        raise InvalidBand(
            f"band [{low:.6g}, {high:.6g}] Hz must lie inside (0, {sample_rate / 2.0:.6g}) Hz"
        )
    return low, high


def design_bandpass(sample_rate: float, center: float, bandwidth: float, order: int = 3) -> np.ndarray:
    """
    Butterworth band-pass with edges center +/- bandwidth/2, as second-order
    sections. Passing ``fs`` makes scipy pre-warp the edges before the
    bilinear transform.
    """
    low, high = _band_edges(sample_rate, center, bandwidth, order)
    return signal.butter(order, [low, high], btype="bandpass", fs=sample_rate, output="sos")


def bandpass(samples: np.ndarray, sample_rate: float, center: float, bandwidth: float,
             order: int = 3) -> np.ndarray:
    """Causal (forward-only) band-pass; filter state starts at rest."""
    sos = design_bandpass(sample_rate, center, bandwidth, order)
    return signal.sosfilt(sos, np.asarray(samples, dtype=float), axis=-1)


def bandpass_response(sample_rate: float, center: float, bandwidth: float, order: int,
                      frequencies: np.ndarray) -> np.ndarray:
    """|H(f)| of the designed filter at ``frequencies`` [Hz]."""
    sos = design_bandpass(sample_rate, center, bandwidth, order)
    _, response = signal.sosfreqz(sos, worN=np.asarray(frequencies, dtype=float), fs=sample_rate)
    return np.abs(response)


def differentiate(positions: np.ndarray, sample_period: float) -> np.ndarray:
    """Central differences inside, one-sided differences at both ends."""
    positions = np.asarray(positions, dtype=float)
    if positions.shape[-1] < 3:
        raise TooShort(f"differentiation needs >= 3 samples, got {positions.shape[-1]}")
    return np.gradient(positions, sample_period, axis=-1, edge_order=1)
