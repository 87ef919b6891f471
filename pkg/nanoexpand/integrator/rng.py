"""
Per-trajectory random streams.

Trajectory i always draws from the Philox stream keyed by (master_seed, i),
so its noise does not depend on how the ensemble is split into batches.
"""

from typing import Sequence

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

NOISE_CHUNK = 4096


def trajectory_rng(master_seed: int, trajectory_index: int) -> Generator:
    return Generator(Philox(SeedSequence(master_seed, spawn_key=(trajectory_index,))))


class NoiseBuffer:
    """
    Standard normals for a batch of trajectories, one column per trajectory.

    Each generator is advanced in chunks of NOISE_CHUNK draws regardless of
    batch size; a trajectory's sequence is the same whichever batch it is in.
    """

    def __init__(self, generators: Sequence[Generator], chunk: int = NOISE_CHUNK):
        self._generators = list(generators)
        self._chunk = chunk
        self._rows = np.empty((0, len(self._generators)))
        self._cursor = 0

    def _refill(self) -> None:
        block = np.empty((self._chunk, len(self._generators)))
        for column, generator in enumerate(self._generators):
            block[:, column] = generator.standard_normal(self._chunk)
        self._rows = block
        self._cursor = 0

    def next(self) -> np.ndarray:
        if self._cursor >= self._rows.shape[0]:
            self._refill()
        row = self._rows[self._cursor]
        self._cursor += 1
        return row
