"""Phase-space snapshots of an ensemble at one sample time."""

import math
import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..functional.errors import GridMismatch, ValidationError
from ..integrator import Ensemble, Trajectory

logger = logging.getLogger(__name__)

SIGMA_SPAN = 4.0
# half-width used when every sample sits at the same value
_FALLBACK_HALF_WIDTH = 1e-30


@dataclass(frozen=True)
class PhaseSpaceHistogram:
    z_edges: np.ndarray
    v_edges: np.ndarray
    counts: np.ndarray
    time: float
    covariance: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.z_edges) <= 0) or np.any(np.diff(self.v_edges) <= 0):
            raise ValidationError("histogram edges strictly increasing")

    @property
    def run_count(self) -> int:
        return int(self.counts.sum())


def _half_width(values: np.ndarray, sigma: float) -> float:
    extent = float(np.max(np.abs(values))) * (1.0 + 1e-9)
    half = max(SIGMA_SPAN * sigma, extent)
    return half if half > 0 else _FALLBACK_HALF_WIDTH


def sample_index(sample_period: float, sample_count: int, time: float) -> int:
    index = int(round(time / sample_period))
    if not 0 <= index < sample_count or abs(index * sample_period - time) > 1e-6 * sample_period:
        raise GridMismatch(f"t = {time} s is not on the sample grid (period {sample_period} s, "
                           f"{sample_count} samples)")
    return index


def phase_space_histogram(trajectories: Union[Ensemble, Sequence[Trajectory]], time: float,
                          bins: int) -> PhaseSpaceHistogram:
    """
    2-D counts of (z, v) with symmetric edges spanning +/-4 sigma per axis,
    widened when a sample lies further out so every run is counted.
    """
    if bins < 1:
        raise ValidationError("bins >= 1", key="analysis.histogram_bins", value=bins)
    ensemble = trajectories if isinstance(trajectories, Ensemble) else Ensemble.from_trajectories(trajectories)
    index = sample_index(ensemble.sample_period, ensemble.sample_count, time)
    z = ensemble.positions[:, index]
    v = ensemble.velocities[:, index]

    ddof = 1 if z.shape[0] > 1 else 0
    sigma_z, sigma_v = float(np.std(z, ddof=ddof)), float(np.std(v, ddof=ddof))
    half_z, half_v = _half_width(z, sigma_z), _half_width(v, sigma_v)
    if half_z > SIGMA_SPAN * sigma_z * (1.0 + 1e-6) or half_v > SIGMA_SPAN * sigma_v * (1.0 + 1e-6):
        logger.debug(f"Histogram at t = {time:.3e} s: edges widened past {SIGMA_SPAN:g} sigma")

    z_edges = np.linspace(-half_z, half_z, bins + 1)
    v_edges = np.linspace(-half_v, half_v, bins + 1)
    counts, _, _ = np.histogram2d(z, v, bins=[z_edges, v_edges])
    covariance = np.cov(np.vstack([z, v]), ddof=ddof) if z.shape[0] > 1 else np.zeros((2, 2))
    return PhaseSpaceHistogram(z_edges, v_edges, counts.astype(np.int64), float(time), covariance)


def phase_space_aspect_ratio(z: np.ndarray, v: np.ndarray, omega: float) -> float:
    """Major over minor standard deviation of the (z, v/omega) ellipse."""
    covariance = np.cov(np.vstack([np.asarray(z, dtype=float), np.asarray(v, dtype=float) / omega]), ddof=1)
    smallest, largest = np.linalg.eigvalsh(covariance)
    if smallest <= 0:
        return math.inf
    return math.sqrt(largest / smallest)
