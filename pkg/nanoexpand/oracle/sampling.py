"""Exact discrete-time sampling of the linear oscillator."""

import math
from typing import Optional, Tuple

import numpy as np
from numpy.random import Generator

from ..functional.errors import ValidationError
from ..physics import PhaseSpacePoint
from .maps import process_noise, segment_map


def sample_linear_trajectory(omega: float, gamma: float, diffusion: float, sample_period: float,
                             n_samples: int, rng: Generator,
                             initial: Optional[PhaseSpacePoint] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    x[k+1] = M x[k] + L xi[k] with M = exp(A T), L L^T = Q(T). Without an
    explicit ``initial`` the first sample is drawn from the stationary state.
    """
    if n_samples < 1:
        raise ValidationError("n_samples >= 1", value=n_samples)
    if sample_period <= 0:
        raise ValidationError("sample_period > 0", value=sample_period)
    if initial is None and not (gamma > 0 and omega > 0):
        raise ValidationError("stationary start needs gamma > 0 and omega > 0", value=(omega, gamma))

    transition = segment_map(omega, gamma, sample_period)
    noise = process_noise(omega, gamma, diffusion, sample_period)
    factor = np.linalg.cholesky(noise) if diffusion > 0 else np.zeros((2, 2))
    increments = rng.standard_normal((n_samples - 1, 2)) @ factor.T

    if initial is None:
        stationary_v = diffusion / (2.0 * gamma)
        z = math.sqrt(stationary_v) / omega * rng.standard_normal()
        v = math.sqrt(stationary_v) * rng.standard_normal()
    else:
        z, v = initial.position, initial.velocity

    (m00, m01), (m10, m11) = transition.tolist()
    positions = np.empty(n_samples)
    velocities = np.empty(n_samples)
    positions[0], velocities[0] = z, v
    for k, (dz, dv) in enumerate(increments.tolist(), start=1):
        z, v = m00 * z + m01 * v + dz, m10 * z + m11 * v + dv
        positions[k], velocities[k] = z, v
    return positions, velocities
