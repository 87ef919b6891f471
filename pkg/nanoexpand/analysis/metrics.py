#!/usr/bin/env python3

"""
Scalar Expansion Metrics

Temperatures, phonon number, thermal spread, dB expansion, exponential
time constants and the first peak of the sigma_z(t) envelope.
"""

import math
import logging
from dataclasses import asdict, dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.ndimage import uniform_filter1d
from scipy.signal import find_peaks

from ..functional.errors import BadWindow, NoPeak, ValidationError
from ..physics import BOLTZMANN, HBAR, ParticleSpec, TrapSpec
from .stats import EnsembleStats

logger = logging.getLogger(__name__)

REFERENCE_TEMPERATURE = 300.0
DEFAULT_SMOOTHING_WINDOW = 51
DEFAULT_MIN_PROMINENCE = 0.1


def expansion_db(sigma: float, sigma_ref: float) -> float:
    """10 log10(sigma / sigma_ref): amplitude ratio on a 10 log scale."""
    if not (sigma > 0 and sigma_ref > 0):
        raise ValidationError("sigma > 0 and sigma_ref > 0", value=(sigma, sigma_ref))
    return 10.0 * math.log10(sigma / sigma_ref)


def variance_expansion_db(sigma: float, sigma_ref: float) -> float:
    """10 log10(sigma^2 / sigma_ref^2)."""
    return 2.0 * expansion_db(sigma, sigma_ref)


def effective_temperature(sigma_sq: float, sigma_sq_300k: float,
                          reference_temperature: float = REFERENCE_TEMPERATURE) -> float:
    if not (sigma_sq > 0 and sigma_sq_300k > 0):
        raise ValidationError("sigma_sq > 0 and sigma_sq_300K > 0", value=(sigma_sq, sigma_sq_300k))
    return reference_temperature * sigma_sq / sigma_sq_300k


def phonon_occupation(temperature: float, omega: float) -> float:
    """Bose-Einstein occupation 1 / (exp(hbar w / k_B T) - 1)."""
    if temperature < 0:
        raise ValidationError("temperature >= 0", value=temperature)
    if temperature == 0:
        return 0.0
    x = HBAR * omega / (BOLTZMANN * temperature)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_spread(temperature: float, particle: ParticleSpec, trap: TrapSpec) -> float:
    """sqrt(hbar/(2 m w) coth(hbar w / 2 k_B T)); the zero-point width at T = 0."""
    if temperature < 0:
        raise ValidationError("temperature >= 0", value=temperature)
    omega = trap.angular_frequency
    zero_point = HBAR / (2.0 * particle.mass * omega)
    if temperature == 0:
        return math.sqrt(zero_point)
    x = HBAR * omega / (2.0 * BOLTZMANN * temperature)
    return math.sqrt(zero_point / math.tanh(x))


@dataclass(frozen=True)
class GrowthFit:
    """Straight-line fit of ln sigma_z(t); tau = 1/slope (inf when flat)."""
    tau: float
    slope: float
    intercept: float
    r_squared: float
    points: int

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.tau)


def fit_window_mask(times: np.ndarray, window: Tuple[float, float]) -> np.ndarray:
    """Samples inside the window; BadWindow when it is reversed, off the record or too short."""
    start, stop = window
    if not start < stop:
        raise BadWindow(f"window start {start} must precede stop {stop}")
    if times.shape[0] < 2:
        raise BadWindow(f"record holds {times.shape[0]} samples")
    slack = 1e-9 * max(float(times[-1] - times[0]), 1e-300)
    if start < times[0] - slack or stop > times[-1] + slack:
        raise BadWindow(f"window [{start}, {stop}] s lies outside [{times[0]}, {times[-1]}] s")
    mask = (times >= start - slack) & (times <= stop + slack)
    if np.count_nonzero(mask) < 2:
        raise BadWindow(f"window [{start}, {stop}] s holds fewer than 2 samples")
    return mask


def _log_linear_fit(stats: EnsembleStats, window: Tuple[float, float]) -> GrowthFit:
    mask = fit_window_mask(stats.times, window)
    sigma = stats.sigma_z[mask]
    if np.any(sigma <= 0):
        raise BadWindow("sigma_z must be > 0 throughout the fit window")

    t = stats.times[mask]
    log_sigma = np.log(sigma)
    slope, intercept = np.polyfit(t, log_sigma, 1)
    residual = log_sigma - (slope * t + intercept)
    total = np.sum((log_sigma - log_sigma.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual ** 2) / total) if total > 0 else 1.0
    flat = abs(slope) * (t[-1] - t[0]) < 1e-12
    tau = math.inf if flat else 1.0 / float(slope)
    return GrowthFit(tau, 0.0 if flat else float(slope), float(intercept), r_squared, int(t.shape[0]))


def growth_time_constant(stats: EnsembleStats, window: Tuple[float, float]) -> GrowthFit:
    fit = _log_linear_fit(stats, window)
    if not fit.is_finite:
        logger.warning(f"sigma_z is flat over {window}; growth time constant is infinite")
    return fit


def relaxation_time_constant(stats: EnsembleStats, window: Tuple[float, float]) -> GrowthFit:
    """Decay constant -1/slope of ln sigma_z, e.g. for feedback cooling after the protocol."""
    fit = _log_linear_fit(stats, window)
    if not fit.is_finite:
        return fit
    return GrowthFit(-fit.tau, fit.slope, fit.intercept, fit.r_squared, fit.points)


def smooth(values: np.ndarray, smoothing_window: int) -> np.ndarray:
    if smoothing_window < 1 or smoothing_window % 2 == 0:
        raise ValidationError("smoothing_window odd and >= 1", key="analysis.smoothing_window",
                              value=smoothing_window)
    return uniform_filter1d(np.asarray(values, dtype=float), size=smoothing_window, mode="nearest")


def find_peak(stats: EnsembleStats, smoothing_window: int = DEFAULT_SMOOTHING_WINDOW,
              min_prominence: float = DEFAULT_MIN_PROMINENCE) -> Tuple[float, float]:
    """
    First local maximum of the moving-average sigma_z whose prominence is at
    least ``min_prominence`` times its height.
    """
    smoothed = smooth(stats.sigma_z, smoothing_window)
    peaks, properties = find_peaks(smoothed, prominence=0.0)
    for index, prominence in zip(peaks, properties["prominences"]):
        if prominence >= min_prominence * smoothed[index]:
            return float(stats.times[index]), float(smoothed[index])
    raise NoPeak(f"no local maximum with prominence >= {min_prominence:g} x height "
                 f"among {len(peaks)} candidates")


def radius_crossing_time(stats: EnsembleStats, radius: float) -> Optional[float]:
    """First sample time with sigma_z >= radius, or None."""
    above = np.flatnonzero(stats.sigma_z >= radius)
    return float(stats.times[above[0]]) if above.size else None


@dataclass(frozen=True)
class ExpansionMetrics:
    sigma_ref: float
    t_peak: float
    sigma_peak: float
    db_amp: float
    db_var: float
    tau_growth: float
    growth_r_squared: float
    radius_crossing_s: float
    thermal_spread_300k: float
    spread_excess: float
    initial_temperature: float
    initial_phonons: float

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


def summarize_expansion(stats: EnsembleStats, particle: ParticleSpec, trap: TrapSpec,
                        growth_window: Tuple[float, float], sigma_ref: float = 0.0,
                        smoothing_window: int = DEFAULT_SMOOTHING_WINDOW,
                        min_prominence: float = DEFAULT_MIN_PROMINENCE) -> ExpansionMetrics:
    """
    Headline numbers of one ensemble. A missing peak or an unusable growth
    window is reported as NaN with a warning instead of failing the run.

    Without ``sigma_ref`` the first sample of ``stats`` is the reference,
    which is only meaningful for unfiltered statistics.
    """
    sigma_ref = sigma_ref if sigma_ref > 0 else float(stats.sigma_z[0])
    nan = float("nan")

    try:
        t_peak, sigma_peak = find_peak(stats, smoothing_window, min_prominence)
    except NoPeak as e:
        logger.warning(f"No expansion peak found: {e}")
        t_peak, sigma_peak = nan, nan

    try:
        growth = growth_time_constant(stats, growth_window)
        tau, r_squared = growth.tau, growth.r_squared
    except BadWindow as e:
        logger.warning(f"Growth fit skipped: {e}")
        tau, r_squared = nan, nan

    have_peak = sigma_peak > 0 and sigma_ref > 0
    crossing = radius_crossing_time(stats, particle.radius)
    spread = thermal_spread(REFERENCE_TEMPERATURE, particle, trap)
    sigma_sq_300k = BOLTZMANN * REFERENCE_TEMPERATURE / (particle.mass * trap.angular_frequency ** 2)
    initial_temperature = (effective_temperature(sigma_ref ** 2, sigma_sq_300k)
                           if sigma_ref > 0 else 0.0)

    return ExpansionMetrics(
        sigma_ref=sigma_ref,
        t_peak=t_peak,
        sigma_peak=sigma_peak,
        db_amp=expansion_db(sigma_peak, sigma_ref) if have_peak else nan,
        db_var=variance_expansion_db(sigma_peak, sigma_ref) if have_peak else nan,
        tau_growth=tau,
        growth_r_squared=r_squared,
        radius_crossing_s=crossing if crossing is not None else nan,
        thermal_spread_300k=spread,
        spread_excess=sigma_peak / spread - 1.0 if have_peak else nan,
        initial_temperature=initial_temperature,
        initial_phonons=phonon_occupation(initial_temperature, trap.angular_frequency),
    )


def temperature_summary(sigma_sq: float, particle: ParticleSpec, trap: TrapSpec) -> Dict[str, float]:
    """T_eff from a position variance [m^2], with n and the thermal spread at that temperature."""
    sigma_sq_300k = BOLTZMANN * REFERENCE_TEMPERATURE / (particle.mass * trap.angular_frequency ** 2)
    temperature = effective_temperature(sigma_sq, sigma_sq_300k)
    return {
        "position_variance_m2": sigma_sq,
        "position_variance_300k_m2": sigma_sq_300k,
        "effective_temperature_k": temperature,
        "phonon_occupation": phonon_occupation(temperature, trap.angular_frequency),
        "thermal_spread_m": thermal_spread(temperature, particle, trap),
        "thermal_spread_300k_m": thermal_spread(REFERENCE_TEMPERATURE, particle, trap),
    }
