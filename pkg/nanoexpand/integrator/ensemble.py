"""
Ensemble runner.

Trajectories are split into fixed batches and integrated on a thread pool.
Each trajectory owns its RNG stream, so the result does not depend on the
number of workers or the batch size.
"""

import os
import time
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import List, Optional

import numpy as np
import psutil

from ..functional.errors import ValidationError
from .config import SimConfig
from .langevin import integration_grid, simulate_batch
from .trajectory import Ensemble

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 64


def resolve_workers(workers: Optional[int] = None) -> int:
    """0 or None means one worker per physical core."""
    if workers:
        return max(1, int(workers))
    return psutil.cpu_count(logical=False) or os.cpu_count() or 1


def _batches(count: int, batch_size: int) -> List[np.ndarray]:
    return [np.arange(lo, min(lo + batch_size, count)) for lo in range(0, count, batch_size)]


def simulate_ensemble(config: SimConfig, count: int, workers: Optional[int] = None,
                      batch_size: int = DEFAULT_BATCH_SIZE) -> Ensemble:
    if count < 1:
        raise ValidationError("ensemble >= 1", key="sim.ensemble", value=count)
    if batch_size < 1:
        raise ValidationError("batch_size >= 1", key="sim.batch_size", value=batch_size)

    workers = resolve_workers(workers)
    grid = integration_grid(config)
    batches = _batches(count, batch_size)
    logger.info(f"Simulating {count} trajectories: {grid.total_steps} steps each, "
                f"{len(batches)} batches on {workers} workers")

    started = time.time()
    run_batch = partial(simulate_batch, config, grid=grid)
    if workers == 1 or len(batches) == 1:
        parts = [run_batch(batch) for batch in batches]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_batch, batches))

    ensemble = Ensemble(
        sample_period=config.sample_period,
        positions=np.vstack([p.positions for p in parts]),
        velocities=np.vstack([p.velocities for p in parts]),
        seed_used=config.seed,
        indices=np.concatenate([p.indices for p in parts]),
    )
    logger.info(f"Ensemble finished in {time.time() - started:.2f}s "
                f"({ensemble.run_count} x {ensemble.sample_count} samples)")
    return ensemble
