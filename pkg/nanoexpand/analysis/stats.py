"""
Cross-ensemble statistics.

At every sample time the ensemble mean is removed and the unbiased (N - 1)
standard deviations and covariance of (z, v) are formed.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from ..functional.errors import GridMismatch, ValidationError
from ..integrator import Ensemble, Trajectory


@dataclass(frozen=True)
class EnsembleStats:
    times: np.ndarray
    sigma_z: np.ndarray
    sigma_v: np.ndarray
    cov_zv: np.ndarray
    run_count: int

    def __post_init__(self):
        n = self.times.shape[0]
        if not (self.sigma_z.shape[0] == self.sigma_v.shape[0] == self.cov_zv.shape[0] == n):
            raise GridMismatch("times, sigma_z, sigma_v and cov_zv differ in length")
        if self.run_count < 2:
            raise ValidationError("run_count >= 2", key="sim.ensemble", value=self.run_count)

    def __len__(self) -> int:
        return int(self.times.shape[0])

    @property
    def sample_period(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self) > 1 else 0.0

    def window(self, start: float, stop: float) -> np.ndarray:
        """Boolean mask of samples with start <= t <= stop."""
        return (self.times >= start) & (self.times <= stop)


def ensemble_stats_from_arrays(positions: np.ndarray, velocities: np.ndarray,
                               sample_period: float) -> EnsembleStats:
    positions = np.asarray(positions, dtype=float)
    velocities = np.asarray(velocities, dtype=float)
    if positions.ndim != 2 or positions.shape != velocities.shape:
        raise GridMismatch(f"positions {positions.shape} and velocities {velocities.shape} "
                           f"must be equal 2-D arrays")
    run_count = positions.shape[0]
    if run_count < 2:
        raise ValidationError("run_count >= 2", key="sim.ensemble", value=run_count)

    dz = positions - positions.mean(axis=0)
    dv = velocities - velocities.mean(axis=0)
    divisor = run_count - 1
    return EnsembleStats(
        times=np.arange(positions.shape[1]) * sample_period,
        sigma_z=np.sqrt(np.sum(dz * dz, axis=0) / divisor),
        sigma_v=np.sqrt(np.sum(dv * dv, axis=0) / divisor),
        cov_zv=np.sum(dz * dv, axis=0) / divisor,
        run_count=run_count,
    )


def ensemble_stats(trajectories: Union[Ensemble, Sequence[Trajectory]]) -> EnsembleStats:
    ensemble = trajectories if isinstance(trajectories, Ensemble) else Ensemble.from_trajectories(trajectories)
    return ensemble_stats_from_arrays(ensemble.positions, ensemble.velocities, ensemble.sample_period)
