"""Sampled trajectories and ensembles."""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from ..functional.errors import GridMismatch


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled z(t) [m] and v(t) [m/s], starting at t = 0."""
    sample_period: float
    positions: np.ndarray
    velocities: np.ndarray
    seed_used: int
    index: int = 0

    def __post_init__(self):
        if self.positions.shape != self.velocities.shape:
            raise GridMismatch("positions and velocities differ in length")

    def __len__(self) -> int:
        return int(self.positions.shape[0])

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self)) * self.sample_period

    def thinned(self, every: int) -> 'Trajectory':
        if every <= 1:
            return self
        return Trajectory(self.sample_period * every, self.positions[::every],
                          self.velocities[::every], self.seed_used, self.index)


@dataclass(frozen=True)
class Ensemble:
    """
    Trajectories sharing one sample grid, stored as (run_count, sample_count)
    arrays. Row i was produced by trajectory index indices[i].
    """
    sample_period: float
    positions: np.ndarray
    velocities: np.ndarray
    seed_used: int
    indices: np.ndarray

    def __post_init__(self):
        if self.positions.ndim != 2 or self.positions.shape != self.velocities.shape:
            raise GridMismatch("ensemble arrays must be 2-D and of equal shape")
        if self.indices.shape[0] != self.positions.shape[0]:
            raise GridMismatch("one index per trajectory is required")

    @property
    def run_count(self) -> int:
        return int(self.positions.shape[0])

    @property
    def sample_count(self) -> int:
        return int(self.positions.shape[1])

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.sample_count) * self.sample_period

    def trajectory(self, row: int) -> Trajectory:
        return Trajectory(self.sample_period, self.positions[row], self.velocities[row],
                          self.seed_used, int(self.indices[row]))

    def trajectories(self) -> List[Trajectory]:
        return [self.trajectory(row) for row in range(self.run_count)]

    @classmethod
    def from_trajectories(cls, trajectories: Sequence[Trajectory]) -> 'Ensemble':
        if not trajectories:
            raise GridMismatch("ensemble needs at least one trajectory")
        first = trajectories[0]
        for traj in trajectories[1:]:
            if len(traj) != len(first) or not np.isclose(traj.sample_period, first.sample_period,
                                                          rtol=1e-12, atol=0.0):
                raise GridMismatch(
                    f"trajectory {traj.index} has {len(traj)} samples at {traj.sample_period} s, "
                    f"expected {len(first)} at {first.sample_period} s"
                )
        return cls(
            sample_period=first.sample_period,
            positions=np.vstack([t.positions for t in trajectories]),
            velocities=np.vstack([t.velocities for t in trajectories]),
            seed_used=first.seed_used,
            indices=np.array([t.index for t in trajectories], dtype=np.int64),
        )
