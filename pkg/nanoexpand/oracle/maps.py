#!/usr/bin/env python3

"""
Linear Phase-Space Maps

Closed-form propagators of the damped harmonic oscillator

    d(z, v) = A (z, v) dt + (0, sqrt(D)) dW,   A = [[0, 1], [-omega^2, -gamma]]

with D the velocity diffusion 2 Gamma_m k_B T / m [m^2/s^3]. Every map is
written as exp(A t) = exp(-gamma t/2) (c I + s (A + gamma/2 I)), where
(c, s) = (cos(w_d t), sin(w_d t)/w_d) in the underdamped branch and the
hyperbolic or linear limits otherwise.
"""

import math
from dataclasses import InitVar, dataclass
from typing import Tuple

import numpy as np

from ..functional.errors import ValidationError
from ..physics import ParticleSpec, TrapSpec, position_variance_at, velocity_variance_at

# relative width of the critically damped branch
_CRITICAL_TOLERANCE = 1e-12


def _branch_terms(omega: float, gamma: float, dt: float) -> Tuple[float, float]:
    g = 0.5 * gamma
    discriminant = omega * omega - g * g
    scale = max(omega * omega, g * g)
    if discriminant > _CRITICAL_TOLERANCE * scale:
        w_d = math.sqrt(discriminant)
        return math.cos(w_d * dt), math.sin(w_d * dt) / w_d
    if discriminant < -_CRITICAL_TOLERANCE * scale:
        kappa = math.sqrt(-discriminant)
        return math.cosh(kappa * dt), math.sinh(kappa * dt) / kappa
    return 1.0, dt


def segment_map(omega: float, gamma: float, dt: float) -> np.ndarray:
    """exp(A dt) for constant stiffness omega^2 and damping gamma."""
    if dt < 0:
        raise ValidationError("dt >= 0", value=dt)
    c, s = _branch_terms(omega, gamma, dt)
    g = 0.5 * gamma
    envelope = math.exp(-g * dt)
    return envelope * np.array([[c + g * s, s],
                                [-omega * omega * s, c - g * s]])


def pulse_map(depth: float, omega_z: float) -> np.ndarray:
    """
    Quarter period at omega sqrt(S) followed by a quarter period at omega.
    The composition is exactly diag(-sqrt(S), -1/sqrt(S)).
    """
    if not 0 < depth <= 1:
        raise ValidationError("0 < depth <= 1", key="modulation.depth", value=depth)
    root = math.sqrt(depth)
    return np.diag([-root, -1.0 / root])


def _relaxation(gamma: float, dt: float) -> float:
    """(1 - exp(-gamma dt)) / gamma, tending to dt as gamma -> 0."""
    if gamma == 0:
        return dt
    return -math.expm1(-gamma * dt) / gamma


def process_noise(omega: float, gamma: float, diffusion: float, dt: float) -> np.ndarray:
    """
    Q(dt) = integral_0^dt exp(A u) diag(0, D) exp(A u)^T du.

    For omega > 0 this is the stationary-Lyapunov difference
    Sigma_inf - M Sigma_inf M^T, rearranged so that no term cancels
    against the large stationary variance when gamma dt is tiny.
    """
    if dt < 0:
        raise ValidationError("dt >= 0", value=dt)
    if diffusion == 0 or dt == 0:
        return np.zeros((2, 2))
    if omega == 0:
        if gamma == 0:
            return diffusion * np.array([[dt ** 3 / 3.0, dt ** 2 / 2.0],
                                         [dt ** 2 / 2.0, dt]])
        one_minus = -math.expm1(-gamma * dt)
        q_vv = diffusion * _relaxation(2.0 * gamma, dt)
        q_zv = diffusion * one_minus ** 2 / (2.0 * gamma ** 2)
        q_zz = diffusion / gamma ** 2 * (dt - 2.0 * one_minus / gamma + _relaxation(2.0 * gamma, dt))
        return np.array([[q_zz, q_zv], [q_zv, q_vv]])

    c, s = _branch_terms(omega, gamma, dt)
    decay = math.exp(-gamma * dt)
    relax = _relaxation(gamma, dt)
    q_zz = diffusion / (2.0 * omega ** 2) * (relax - decay * (c * s + 0.5 * gamma * s * s))
    q_vv = 0.5 * diffusion * (relax + decay * (c * s - 0.5 * gamma * s * s))
    q_zv = 0.5 * diffusion * decay * s * s
    return np.array([[q_zz, q_zv], [q_zv, q_vv]])


@dataclass(frozen=True)
class CovarianceState:
    """Gaussian summary: mean (z, v) and the 2x2 covariance of (z, v)."""
    mean: np.ndarray
    covariance: np.ndarray
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        cov = self.covariance
        if cov.shape != (2, 2) or self.mean.shape != (2,):
            raise ValidationError("mean has shape (2,) and covariance (2, 2)")
        if not check:
            return
        tolerance = 1e-9
        if cov[0, 0] < 0 or cov[1, 1] < 0:
            raise ValidationError("sigma_zz >= 0 and sigma_vv >= 0", value=(cov[0, 0], cov[1, 1]))
        if not math.isclose(cov[0, 1], cov[1, 0], rel_tol=tolerance, abs_tol=0.0):
            raise ValidationError("covariance is symmetric", value=(cov[0, 1], cov[1, 0]))
        determinant = cov[0, 0] * cov[1, 1] - cov[0, 1] ** 2
        if determinant < -tolerance * cov[0, 0] * cov[1, 1]:
            raise ValidationError("sigma_zz sigma_vv - sigma_zv^2 >= 0", value=determinant)

    @classmethod
    def centered(cls, sigma_zz: float, sigma_zv: float, sigma_vv: float) -> 'CovarianceState':
        return cls(np.zeros(2), np.array([[sigma_zz, sigma_zv], [sigma_zv, sigma_vv]]))

    @property
    def second_moments(self) -> Tuple[float, float, float]:
        return float(self.covariance[0, 0]), float(self.covariance[0, 1]), float(self.covariance[1, 1])

    @property
    def sigma_z(self) -> float:
        return math.sqrt(max(self.covariance[0, 0], 0.0))

    @property
    def sigma_v(self) -> float:
        return math.sqrt(max(self.covariance[1, 1], 0.0))

    def phase_space_area(self, omega: float) -> float:
        """sqrt(det) of the covariance of (z, v/omega)."""
        determinant = self.covariance[0, 0] * self.covariance[1, 1] - self.covariance[0, 1] ** 2
        return math.sqrt(max(determinant, 0.0)) / omega

    def major_axis_sigma(self, omega: float) -> float:
        """Largest standard deviation of the (z, v/omega) ellipse."""
        scale = np.diag([1.0, 1.0 / omega])
        return math.sqrt(max(float(np.linalg.eigvalsh(scale @ self.covariance @ scale)[-1]), 0.0))

    def mapped(self, matrix: np.ndarray, noise: np.ndarray = None) -> 'CovarianceState':
        covariance = matrix @ self.covariance @ matrix.T
        if noise is not None:
            covariance = covariance + noise
        covariance = 0.5 * (covariance + covariance.T)
        # PSD by construction
        return CovarianceState(matrix @ self.mean, covariance, check=False)


def propagate(state: CovarianceState, omega: float, gamma: float, diffusion: float,
              dt: float) -> CovarianceState:
    """mean <- M mean, Sigma <- M Sigma M^T + Q(dt)."""
    return state.mapped(segment_map(omega, gamma, dt), process_noise(omega, gamma, diffusion, dt))


def thermal_covariance(temperature: float, trap: TrapSpec, particle: ParticleSpec) -> CovarianceState:
    """Isotropic thermal state diag(k_B T/(m w^2), k_B T/m)."""
    if temperature < 0:
        raise ValidationError("temperature >= 0", value=temperature)
    return CovarianceState.centered(position_variance_at(temperature, trap, particle), 0.0,
                                    velocity_variance_at(temperature, particle))
