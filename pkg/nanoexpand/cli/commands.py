#!/usr/bin/env python3

"""
Command Workflows

One function per subcommand. Each returns a Result carrying the written
RunManifest (or the printed summary) so the entry point can turn any
surfaced error into an exit code in one place. All files are written by
the calling thread after the numerical work has finished.
"""

import re
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..analysis import (
    EnsembleStats,
    ensemble_stats,
    ensemble_stats_from_arrays,
    fit_window_mask,
    phase_space_aspect_ratio,
    phase_space_histogram,
    summarize_expansion,
    temperature_summary,
)
from ..dsp import LorentzianFit, calibrate_spectrum, lorentzian_model, welch_psd
from ..functional.errors import GridMismatch, IoError, NanoexpandError, NoConvergence, ParseError, TooShort
from ..functional.result_monad import result_wrapper
from ..integrator import Ensemble, Trajectory, simulate_ensemble, trajectory_rng
from ..modulation import describe_protocol
from ..oracle import (
    covariance_columns,
    growth_constants,
    initial_covariance,
    propagate_schedule,
    predicted_expansion_db,
    pulse_map,
    sample_linear_trajectory,
)
from ..physics import BOLTZMANN, GasEnvironment, gas_damping_rate
from ..pipeline import ProcessingContext, SignalBundle, create_default_pipeline
from .config import ExperimentConfig, format_value
from .manifest import RunManifest

logger = logging.getLogger(__name__)

TRAJECTORY_DIR = "trajectories"
TRAJECTORY_HEADER = "t,z,v"
STATS_HEADER = "t,sigma_z,sigma_v,cov_zv,db_amp,db_var"
HISTOGRAM_HEADER = "z_lo,z_hi,v_lo,v_hi,count"
SPECTRUM_HEADER = "f,density,model"
_TRAJECTORY_NAME = re.compile(r"traj_(\d+)\.csv$")

PathLike = Union[str, Path]


def _prepare_dir(path: PathLike) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise IoError(f"cannot create output directory {path}: {e}") from e
    return path


def write_csv(path: Path, header: str, columns: Sequence[np.ndarray], integer_last: bool = False) -> Path:
    """Columns as rows of round-trippable %.17g numbers under a single header line."""
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    fmt = ["%.17g"] * data.shape[1]
    if integer_last:
        fmt[-1] = "%d"
    try:
        np.savetxt(path, data, fmt=fmt, delimiter=",", header=header, comments="")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
    return path


def write_report(path: Path, values: Dict[str, object]) -> Path:
    text = "".join(f"{key} = {format_value(value)}\n" for key, value in values.items())
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
    return path


def read_trajectory(path: PathLike, index: int = 0, seed: int = 0) -> Trajectory:
    """A ``t,z,v`` CSV on a uniform time grid."""
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as handle:
            header = handle.readline().strip()
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    except ValueError as e:
        raise ParseError(f"{path}: {e}") from None
    if header != TRAJECTORY_HEADER:
        raise ParseError(f"{path}: expected header '{TRAJECTORY_HEADER}', got '{header}'", line=1)
    if data.shape[0] < 2 or data.shape[1] != 3:
        raise TooShort(f"{path}: need at least 2 rows of t,z,v")

    t = data[:, 0]
    period = float(t[-1] - t[0]) / (t.shape[0] - 1)
    if not period > 0 or not np.allclose(np.diff(t), period, rtol=1e-6, atol=0.0):
        raise GridMismatch(f"{path}: samples are not uniformly spaced")
    return Trajectory(period, data[:, 1].copy(), data[:, 2].copy(), seed, index)


def read_trajectory_dir(directory: PathLike, seed: int = 0) -> List[Trajectory]:
    """Every traj_XXXXX.csv in a directory (or its trajectories/ subdirectory), by index."""
    directory = Path(directory)
    if (directory / TRAJECTORY_DIR).is_dir():
        directory = directory / TRAJECTORY_DIR
    if not directory.is_dir():
        raise IoError(f"trajectory directory not found: {directory}")
    found = []
    for path in directory.iterdir():
        match = _TRAJECTORY_NAME.match(path.name)
        if match:
            found.append((int(match.group(1)), path))
    found.sort()
    logger.info(f"Reading {len(found)} trajectories from {directory}")
    return [read_trajectory(path, index, seed) for index, path in found]


def _db_columns(sigma_z: np.ndarray, sigma_ref: float) -> Tuple[np.ndarray, np.ndarray]:
    db_amp = np.full(sigma_z.shape, np.nan)
    if sigma_ref > 0:
        positive = sigma_z > 0
        db_amp[positive] = 10.0 * np.log10(sigma_z[positive] / sigma_ref)
    return db_amp, 2.0 * db_amp


def write_stats(path: Path, times: np.ndarray, sigma_z: np.ndarray, sigma_v: np.ndarray,
                cov_zv: np.ndarray, sigma_ref: float) -> Path:
    db_amp, db_var = _db_columns(sigma_z, sigma_ref)
    return write_csv(path, STATS_HEADER, [times, sigma_z, sigma_v, cov_zv, db_amp, db_var])


def _reference_sigma(config: ExperimentConfig, sigma_z: np.ndarray) -> float:
    return config.analysis.sigma_ref_m if config.analysis.sigma_ref_m > 0 else float(sigma_z[0])


def _unfiltered_reference_sigma(config: ExperimentConfig, ensemble: Ensemble) -> float:
    """sigma_z at t = 0 of the stored positions; a causal filter's first output is not settled."""
    first = ensemble_stats_from_arrays(ensemble.positions[:, :1], ensemble.velocities[:, :1],
                                       ensemble.sample_period)
    return _reference_sigma(config, first.sigma_z)


def _thinned(ensemble: Ensemble, every: int) -> Ensemble:
    if every <= 1:
        return ensemble
    return Ensemble(ensemble.sample_period * every, ensemble.positions[:, ::every],
                    ensemble.velocities[:, ::every], ensemble.seed_used, ensemble.indices)


def _finish(manifest: RunManifest, output_dir: Path, written: List[Path]) -> RunManifest:
    manifest.record_outputs(output_dir, written)
    manifest.finish().write(output_dir)
    return manifest


@result_wrapper()
def run_simulate(config: ExperimentConfig, output_dir: PathLike) -> RunManifest:
    """Monte Carlo ensemble: optional per-trajectory CSVs, stats.csv and the manifest."""
    manifest = RunManifest.start("simulate", config)
    sim = config.sim_config()
    ensemble = simulate_ensemble(sim, config.sim.ensemble, workers=config.sim.workers or None,
                                 batch_size=config.sim.batch_size)
    ensemble = _thinned(ensemble, config.sim.thin)

    output_dir = _prepare_dir(output_dir)
    written: List[Path] = []
    if config.sim.keep_trajectories:
        trajectory_dir = _prepare_dir(output_dir / TRAJECTORY_DIR)
        for trajectory in ensemble.trajectories():
            path = trajectory_dir / f"traj_{trajectory.index:05d}.csv"
            written.append(write_csv(path, TRAJECTORY_HEADER,
                                     [trajectory.times, trajectory.positions, trajectory.velocities]))
        logger.info(f"Wrote {ensemble.run_count} trajectories to {trajectory_dir}")

    if ensemble.run_count >= 2:
        stats = ensemble_stats(ensemble)
        written.append(write_stats(output_dir / "stats.csv", stats.times, stats.sigma_z, stats.sigma_v,
                                   stats.cov_zv, _reference_sigma(config, stats.sigma_z)))
    else:
        logger.warning("A single trajectory has no ensemble statistics; stats.csv not written")

    return _finish(manifest, output_dir, written)


def oracle_report(config: ExperimentConfig) -> Dict[str, object]:
    """Analytic gain, both growth constants, the pulse map and the schedule summary."""
    trap = config.trap_spec()
    depth, pulses = config.modulation.depth, config.modulation.pulses
    constants = growth_constants(depth, trap.angular_frequency)
    matrix = pulse_map(depth, trap.angular_frequency)
    report: Dict[str, object] = {
        "depth": depth,
        "pulses": pulses,
        "db_per_pulse": constants.db_per_pulse,
        "db_total": predicted_expansion_db(pulses, depth),
        "tau_amp_s": constants.tau_amp,
        "tau_var_s": constants.tau_var,
        "pulse_period_s": constants.pulse_period,
        "pulse_map_zz": float(matrix[0, 0]),
        "pulse_map_zv": float(matrix[0, 1]),
        "pulse_map_vz": float(matrix[1, 0]),
        "pulse_map_vv": float(matrix[1, 1]),
    }
    schedule = config.sim_config().schedule
    for key, value in describe_protocol(schedule, trap.angular_frequency).items():
        report[f"protocol.{key}"] = value
    return report


@result_wrapper()
def run_oracle(config: ExperimentConfig, output_dir: PathLike) -> RunManifest:
    """Exact linear propagation of the configured run: oracle.csv and report.txt."""
    manifest = RunManifest.start("oracle", config)
    sim = config.sim_config()
    period = sim.sample_period * config.sim.thin
    times = np.arange(0, sim.sample_count, config.sim.thin) * sim.sample_period
    states = propagate_schedule(initial_covariance(sim), sim, times)
    sigma_zz, sigma_zv, sigma_vv = covariance_columns(states)
    sigma_z, sigma_v = np.sqrt(sigma_zz), np.sqrt(sigma_vv)

    output_dir = _prepare_dir(output_dir)
    written = [write_stats(output_dir / "oracle.csv", times, sigma_z, sigma_v, sigma_zv,
                           _reference_sigma(config, sigma_z))]
    report = oracle_report(config)
    report["sample_period_s"] = period
    report["sigma_z_max_m"] = float(np.max(sigma_z))
    written.append(write_report(output_dir / "report.txt", report))
    logger.info(f"Oracle: {report['db_per_pulse']:.4f} dB/pulse, tau_amp = {report['tau_amp_s']:.4g} s")
    return _finish(manifest, output_dir, written)


def synthetic_record(config: ExperimentConfig) -> Tuple[np.ndarray, float]:
    """
    Exactly sampled thermal trajectory at the calibration pressure and
    temperature, divided by ``synthetic_scale`` to mimic detector units.
    """
    cal, sim = config.calibration, config.sim
    particle, trap = config.particle_spec(), config.trap_spec()
    gas = GasEnvironment.from_mbar(cal.synthetic_pressure_mbar, cal.temperature_k, config.gas.molecular_mass_kg)
    damping = gas_damping_rate(gas, particle)
    diffusion = 2.0 * damping * BOLTZMANN * cal.temperature_k / particle.mass
    n_samples = int(cal.synthetic_duration_s * sim.sample_rate_hz) + 1
    positions, _ = sample_linear_trajectory(trap.angular_frequency, damping, diffusion,
                                            1.0 / sim.sample_rate_hz, n_samples, trajectory_rng(sim.seed, 0))
    return positions / cal.synthetic_scale, sim.sample_rate_hz


@result_wrapper()
def run_calibrate(config: ExperimentConfig, output_dir: PathLike, trajectory_path: Optional[PathLike] = None,
                  cooled_path: Optional[PathLike] = None) -> RunManifest:
    """
    Welch spectrum, Lorentzian fit and equipartition factor of a thermal
    record (a t,z,v file or, without one, a synthetic record). A second
    ``cooled_path`` record in the same units is converted with the factor
    and reported as an effective temperature.
    """
    manifest = RunManifest.start("calibrate", config)
    cal = config.calibration
    particle, trap = config.particle_spec(), config.trap_spec()

    if trajectory_path is not None:
        record = read_trajectory(trajectory_path)
        samples, sample_rate = record.positions, 1.0 / record.sample_period
        source = str(trajectory_path)
    else:
        samples, sample_rate = synthetic_record(config)
        source = "synthetic"

    spectrum = welch_psd(samples, sample_rate, cal.segment_length, cal.overlap)
    try:
        calibration = calibrate_spectrum(spectrum, cal.temperature_k, particle, trap)
    except NoConvergence as e:
        raise NoConvergence(f"{e}; {describe_best_iterate(e.best_fit)}", best_fit=e.best_fit) from e
    fit = calibration.fit

    report: Dict[str, object] = {"source": source, "sample_rate_hz": sample_rate,
                                 "averages": spectrum.averages}
    report.update(calibration.as_dict())
    report["quality_factor"] = fit.quality_factor
    if trajectory_path is None:
        report["injected_scale"] = cal.synthetic_scale
        report["factor_relative_error"] = calibration.factor / cal.synthetic_scale - 1.0
    record_variance = float(np.var(samples, ddof=1)) * calibration.factor ** 2
    report.update({f"record.{k}": v for k, v in temperature_summary(record_variance, particle, trap).items()})
    if cooled_path is not None:
        cooled = read_trajectory(cooled_path)
        cooled_variance = float(np.var(cooled.positions, ddof=1)) * calibration.factor ** 2
        report["cooled.source"] = str(cooled_path)
        report.update({f"cooled.{k}": v for k, v in temperature_summary(cooled_variance, particle, trap).items()})

    output_dir = _prepare_dir(output_dir)
    model = lorentzian_model(spectrum.frequencies, fit.amplitude, fit.center_frequency, fit.linewidth, fit.floor)
    written = [
        write_csv(output_dir / "spectrum.csv", SPECTRUM_HEADER, [spectrum.frequencies, spectrum.density, model]),
        write_report(output_dir / "report.txt", report),
    ]
    return _finish(manifest, output_dir, written)


def describe_best_iterate(fit: Optional[LorentzianFit]) -> str:
    if fit is None:
        return "no iterate available"
    return (f"best iterate f0 = {fit.center_frequency:.6g} Hz, Gamma = {fit.linewidth:.4g} 1/s, "
            f"area = {fit.integrated_area:.4g}, residual {fit.residual_norm:.3e} "
            f"after {fit.iterations} evaluations")


def _histogram_name(time: float) -> str:
    return f"histogram_{round(time * 1e6, 3):g}us.csv"


@result_wrapper()
def run_analyze(config: ExperimentConfig, trajectory_dir: PathLike, output_dir: PathLike) -> RunManifest:
    """
    Measurement chain over stored trajectories: stats.csv, one histogram per
    requested time and metrics.txt.
    """
    manifest = RunManifest.start("analyze", config)
    settings = config.analysis
    particle, trap = config.particle_spec(), config.trap_spec()

    ensemble = Ensemble.from_trajectories(read_trajectory_dir(trajectory_dir, config.sim.seed))
    pipeline = create_default_pipeline(
        trap.frequency_hz,
        bandpass_enabled=settings.bandpass,
        bandpass_width_hz=settings.bandpass_width_hz,
        bandpass_order=settings.bandpass_order,
        differentiate_positions=settings.differentiate,
        bandpass_center_hz=settings.bandpass_center_hz,
    )
    bundle = SignalBundle(ensemble.positions, ensemble.sample_period, velocities=ensemble.velocities)
    processed_bundle = (pipeline.process(bundle, ProcessingContext(run_id=f"analyze-{config.sim.seed}"))
                        .map_error(NanoexpandError)
                        .get_or_raise())
    stats: EnsembleStats = processed_bundle.stats
    fit_window_mask(stats.times, settings.growth_window_s)

    sigma_ref = _unfiltered_reference_sigma(config, ensemble)
    output_dir = _prepare_dir(output_dir)
    written = [write_stats(output_dir / "stats.csv", stats.times, stats.sigma_z, stats.sigma_v,
                           stats.cov_zv, sigma_ref)]

    measured = Ensemble(ensemble.sample_period, processed_bundle.positions, processed_bundle.velocities,
                        ensemble.seed_used, ensemble.indices)
    aspect_ratios: Dict[str, float] = {}
    for time in settings.histogram_times_s:
        histogram = phase_space_histogram(measured, time, settings.histogram_bins)
        lo_z, lo_v = np.meshgrid(histogram.z_edges[:-1], histogram.v_edges[:-1], indexing="ij")
        hi_z, hi_v = np.meshgrid(histogram.z_edges[1:], histogram.v_edges[1:], indexing="ij")
        written.append(write_csv(output_dir / _histogram_name(time), HISTOGRAM_HEADER,
                                 [lo_z.ravel(), hi_z.ravel(), lo_v.ravel(), hi_v.ravel(),
                                  histogram.counts.ravel()], integer_last=True))
        index = int(round(time / measured.sample_period))
        key = f"aspect_ratio_{round(time * 1e6, 3):g}us"
        aspect_ratios[key] = phase_space_aspect_ratio(measured.positions[:, index], measured.velocities[:, index],
                                                      trap.angular_frequency)

    metrics = summarize_expansion(stats, particle, trap, settings.growth_window_s, sigma_ref,
                                  settings.smoothing_window, settings.min_prominence)
    values: Dict[str, object] = {"run_count": stats.run_count, "sample_period_s": stats.sample_period}
    values.update(metrics.as_dict())
    values.update(aspect_ratios)
    written.append(write_report(output_dir / "metrics.txt", values))
    logger.info(f"Analysis: peak {metrics.db_amp:.2f} dB at {metrics.t_peak * 1e3:.3f} ms "
                f"over {stats.run_count} runs")
    return _finish(manifest, output_dir, written)


@result_wrapper()
def run_protocol(config: ExperimentConfig) -> Dict[str, float]:
    trap = config.trap_spec()
    return describe_protocol(config.sim_config().schedule, trap.angular_frequency)
