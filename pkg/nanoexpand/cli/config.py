#!/usr/bin/env python3

"""
Experiment Configuration

Flat ``section.key = value`` files with SI units in the key names. The
schema is one pydantic model per section; every range constraint carries
its invariant as the field description so a violation names both the key
and the rule it broke.
"""

import math
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from pydantic import ValidationError as PydanticValidationError

from ..functional.errors import IoError, ParseError, ValidationError
from ..integrator import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_FEEDBACK_GAIN,
    DEFAULT_SAMPLE_RATE,
    ExplicitInitial,
    SimConfig,
    ThermalInitial,
    default_time_step,
)
from ..modulation import ModulationSchedule
from ..physics import (
    AIR_MOLECULE_MASS,
    GasEnvironment,
    ParticleSpec,
    PhaseSpacePoint,
    TrapModel,
    TrapSpec,
)

logger = logging.getLogger(__name__)

BUNDLED_CONFIG_DIR = Path(__file__).parent / "configs"
DEFAULT_CONFIG_NAME = "paper-defaults"

ConfigValue = Union[bool, int, float, str, List[float]]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParticleSection(_Section):
    radius_m: float = Field(1.0e-7, gt=0, description="radius > 0")
    density_kg_m3: float = Field(1800.0, gt=0, description="density > 0")
    refractive_index: float = Field(1.44, ge=1, description="refractive_index >= 1")


class GasSection(_Section):
    pressure_mbar: float = Field(3e-7, ge=0, allow_inf_nan=False, description="pressure >= 0")
    temperature_k: float = Field(300.0, ge=0, allow_inf_nan=False, description="temperature >= 0")
    molecular_mass_kg: float = Field(AIR_MOLECULE_MASS, gt=0, description="molecular_mass > 0")


class TrapSection(_Section):
    f_z_hz: float = Field(77600.0, gt=0, allow_inf_nan=False, description="f_z > 0")
    medium_index: float = Field(1.0, ge=1, description="medium_index >= 1")
    waist_m: float = Field(5e-7, gt=0, description="waist > 0")
    wavelength_m: float = Field(1.55e-6, gt=0, description="wavelength > 0")
    model: Literal["harmonic", "gaussian-axial"] = Field(
        "gaussian-axial", description="model is harmonic or gaussian-axial")


class ModulationSection(_Section):
    depth: float = Field(0.9, gt=0, le=1, description="0 < depth <= 1")
    pulses: int = Field(1000, ge=0, description="pulses >= 0")
    start_s: float = Field(0.0, ge=0, allow_inf_nan=False, description="start >= 0")


class FeedbackSection(_Section):
    gain_per_s: float = Field(DEFAULT_FEEDBACK_GAIN, ge=0, allow_inf_nan=False, description="gain >= 0")
    enable_start_s: Optional[float] = Field(None, ge=0, description="enable_start >= 0")
    enable_stop_s: float = Field(math.inf, ge=0, description="enable_stop >= 0")
    before_protocol: bool = Field(True, description="before_protocol is true or false")
    lock_threshold_m: float = Field(0.0, ge=0, allow_inf_nan=False, description="lock_threshold >= 0")

    @model_validator(mode="after")
    def _ordered_window(self) -> 'FeedbackSection':
        if self.enable_start_s is not None and self.enable_start_s > self.enable_stop_s:
            raise ValueError("enable_start_s <= enable_stop_s")
        return self


class SimSection(_Section):
    time_step_s: Optional[float] = Field(None, gt=0, allow_inf_nan=False, description="time_step > 0")
    duration_s: float = Field(8e-3, ge=0, allow_inf_nan=False, description="duration >= 0 and finite")
    sample_rate_hz: float = Field(DEFAULT_SAMPLE_RATE, gt=0, allow_inf_nan=False,
                                  description="sample_rate > 0")
    seed: int = Field(20240917, ge=0, lt=2 ** 64, description="seed is a 64-bit unsigned integer")
    ensemble: int = Field(671, ge=1, description="ensemble >= 1")
    initial: Literal["thermal", "explicit"] = Field("thermal", description="initial is thermal or explicit")
    initial_temperature_k: float = Field(4.18e-3, ge=0, allow_inf_nan=False,
                                         description="initial_temperature >= 0")
    initial_z_m: Optional[float] = Field(None, allow_inf_nan=False, description="initial_z finite")
    initial_v_m_s: Optional[float] = Field(None, allow_inf_nan=False, description="initial_v finite")
    workers: int = Field(0, ge=0, description="workers >= 0")
    batch_size: int = Field(DEFAULT_BATCH_SIZE, ge=1, description="batch_size >= 1")
    keep_trajectories: bool = Field(False, description="keep_trajectories is true or false")
    thin: int = Field(1, ge=1, description="thin >= 1")

    @model_validator(mode="after")
    def _explicit_point(self) -> 'SimSection':
        if self.initial == "explicit" and (self.initial_z_m is None or self.initial_v_m_s is None):
            raise ValueError("initial_z_m and initial_v_m_s are required when initial = explicit")
        return self


class AnalysisSection(_Section):
    bandpass: bool = Field(False, description="bandpass is true or false")
    bandpass_center_hz: Optional[float] = Field(None, gt=0, description="bandpass_center > 0")
    bandpass_width_hz: float = Field(14000.0, gt=0, description="bandpass_width > 0")
    bandpass_order: int = Field(3, ge=1, le=12, description="1 <= bandpass_order <= 12")
    differentiate: bool = Field(True, description="differentiate is true or false")
    smoothing_window: int = Field(51, ge=1, description="smoothing_window odd and >= 1")
    min_prominence: float = Field(0.1, ge=0, le=1, description="0 <= min_prominence <= 1")
    growth_window_s: Tuple[float, float] = Field((1e-4, 7e-4), description="growth window start < stop")
    histogram_times_s: List[float] = Field(
        default_factory=lambda: [1e-4, 2e-4, 3e-4, 4e-4, 5e-4, 6e-4, 7e-4, 8e-4],
        description="histogram times >= 0")
    histogram_bins: int = Field(41, ge=1, description="histogram_bins >= 1")
    sigma_ref_m: float = Field(0.0, ge=0, allow_inf_nan=False, description="sigma_ref >= 0")

    @field_validator("histogram_times_s", mode="before")
    @classmethod
    def _scalar_to_list(cls, value: Any) -> Any:
        return [value] if isinstance(value, (int, float)) else value

    @field_validator("smoothing_window")
    @classmethod
    def _odd_window(cls, value: int) -> int:
        if value % 2 == 0:
            raise ValueError("smoothing_window odd and >= 1")
        return value

    @model_validator(mode="after")
    def _windows(self) -> 'AnalysisSection':
        start, stop = self.growth_window_s
        if not start < stop:
            raise ValueError("growth window start < stop")
        if any(t < 0 for t in self.histogram_times_s):
            raise ValueError("histogram times >= 0")
        return self


class CalibrationSection(_Section):
    segment_length: int = Field(16384, ge=2, description="segment_length >= 2")
    overlap: float = Field(0.5, ge=0, lt=1, description="0 <= overlap < 1")
    temperature_k: float = Field(300.0, gt=0, allow_inf_nan=False, description="temperature > 0")
    synthetic_pressure_mbar: float = Field(5.0, gt=0, allow_inf_nan=False,
                                           description="synthetic_pressure > 0")
    synthetic_duration_s: float = Field(0.2, gt=0, allow_inf_nan=False, description="synthetic_duration > 0")
    synthetic_scale: float = Field(1.0, gt=0, allow_inf_nan=False, description="synthetic_scale > 0")


class ExperimentConfig(BaseModel):
    """Every section of one configuration file."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    particle: ParticleSection = Field(default_factory=ParticleSection)
    gas: GasSection = Field(default_factory=GasSection)
    trap: TrapSection = Field(default_factory=TrapSection)
    modulation: ModulationSection = Field(default_factory=ModulationSection)
    feedback: FeedbackSection = Field(default_factory=FeedbackSection)
    sim: SimSection = Field(default_factory=SimSection)
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)
    calibration: CalibrationSection = Field(default_factory=CalibrationSection)

    def with_overrides(self, seed: Optional[int] = None, ensemble: Optional[int] = None,
                       workers: Optional[int] = None,
                       keep_trajectories: Optional[bool] = None) -> 'ExperimentConfig':
        """CLI flags win over the file; the result is re-validated."""
        changes = {
            "seed": seed,
            "ensemble": ensemble,
            "workers": workers,
            "keep_trajectories": keep_trajectories,
        }
        changes = {k: v for k, v in changes.items() if v is not None}
        if not changes:
            return self
        data = self.model_dump()
        data["sim"].update(changes)
        return _validate(data, {})

    def particle_spec(self) -> ParticleSpec:
        p = self.particle
        return ParticleSpec(p.radius_m, p.density_kg_m3, p.refractive_index)

    def gas_environment(self) -> GasEnvironment:
        g = self.gas
        return GasEnvironment.from_mbar(g.pressure_mbar, g.temperature_k, g.molecular_mass_kg)

    def trap_spec(self) -> TrapSpec:
        t = self.trap
        return TrapSpec.from_frequency(t.f_z_hz, medium_index=t.medium_index, waist_radius=t.waist_m,
                                       wavelength=t.wavelength_m, model=TrapModel.parse(t.model))

    def sim_config(self) -> SimConfig:
        trap = self.trap_spec()
        m, fb, sim = self.modulation, self.feedback, self.sim
        schedule = ModulationSchedule.from_depth(m.depth, trap.angular_frequency, m.pulses, m.start_s)
        if sim.initial == "explicit":
            initial = ExplicitInitial(PhaseSpacePoint(sim.initial_z_m, sim.initial_v_m_s))
        else:
            initial = ThermalInitial(sim.initial_temperature_k)
        enable_start = fb.enable_start_s if fb.enable_start_s is not None else schedule.end_time
        return SimConfig(
            particle=self.particle_spec(),
            gas=self.gas_environment(),
            trap=trap,
            schedule=schedule,
            time_step=sim.time_step_s if sim.time_step_s is not None else default_time_step(trap),
            duration=sim.duration_s,
            sample_rate=sim.sample_rate_hz,
            seed=sim.seed,
            initial_state=initial,
            feedback_gain=fb.gain_per_s,
            feedback_enabled_interval=(enable_start, max(enable_start, fb.enable_stop_s)),
            feedback_before_protocol=fb.before_protocol,
            feedback_lock_threshold=fb.lock_threshold_m,
        )


# pydantic error types that mean "could not read the value" rather than "value out of range"
_PARSE_ERROR_SUFFIXES = ("_parsing", "_type", "int_from_float", "too_short", "too_long")


def _coerce(text: str, line: int, key: str) -> ConfigValue:
    if not text:
        raise ParseError("missing value", line=line, key=key)
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if "," in text:
        try:
            return [float(part) for part in text.split(",")]
        except ValueError:
            raise ParseError(f"expected a comma-separated list of numbers, got '{text}'",
                             line=line, key=key) from None
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def _field_description(loc: Tuple[str, ...]) -> Optional[str]:
    if len(loc) < 2:
        return None
    section = ExperimentConfig.model_fields.get(str(loc[0]))
    if section is None or not isinstance(section.annotation, type):
        return None
    field = section.annotation.model_fields.get(str(loc[1]))
    return field.description if field is not None else None


def _validate(data: Dict[str, Dict[str, Any]], lines: Dict[str, int]) -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except PydanticValidationError as e:
        error = e.errors()[0]
        loc = tuple(str(part) for part in error["loc"])
        key = ".".join(loc[:2]) if loc else None
        value = error.get("input")
        if any(error["type"].endswith(suffix) for suffix in _PARSE_ERROR_SUFFIXES):
            raise ParseError(f"cannot read value {value!r}: {error['msg']}",
                             line=lines.get(key or ""), key=key) from None
        invariant = _field_description(loc) or error["msg"].removeprefix("Value error, ")
        raise ValidationError(invariant, key=key, value=value if len(loc) >= 2 else None) from None


def parse_config_text(text: str, source: str = "<string>") -> ExperimentConfig:
    """Parse the contents of a configuration file."""
    data: Dict[str, Dict[str, Any]] = {}
    lines: Dict[str, int] = {}

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'section.key = value', got '{line}'", line=number)
        key, value = (part.strip() for part in line.split("=", 1))
        section, dot, name = key.partition(".")
        if not dot or not name or "." in name:
            raise ParseError("keys have the form section.key", line=number, key=key)
        section_field = ExperimentConfig.model_fields.get(section)
        if section_field is None:
            raise ParseError(f"unknown section '{section}'", line=number, key=key)
        if name not in section_field.annotation.model_fields:
            raise ParseError("unknown key", line=number, key=key)
        if key in lines:
            raise ParseError(f"duplicate key (first set on line {lines[key]})", line=number, key=key)
        data.setdefault(section, {})[name] = _coerce(value, number, key)
        lines[key] = number

    if not lines:
        raise ParseError(f"{source} contains no settings")
    config = _validate(data, lines)
    logger.debug(f"Parsed {len(lines)} settings from {source}")
    return config


def resolve_config_path(path: Union[str, Path]) -> Path:
    """A file path, or the name of a bundled configuration such as 'paper-defaults'."""
    candidate = Path(path)
    if candidate.is_file():
        return candidate
    bundled = BUNDLED_CONFIG_DIR / f"{candidate.name}.conf"
    if candidate.suffix == "" and bundled.is_file():
        return bundled
    raise IoError(f"configuration file not found: {path}")


def parse_config(path: Union[str, Path]) -> ExperimentConfig:
    resolved = resolve_config_path(path)
    try:
        text = resolved.read_text(encoding="utf-8")
    except OSError as e:
        raise IoError(f"cannot read {resolved}: {e}") from e
    return parse_config_text(text, source=str(resolved))


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(repr(float(v)) for v in value)
    return str(value)


def config_items(config: ExperimentConfig) -> List[Tuple[str, str]]:
    """(key, text) for every set key in schema order; unset optionals are omitted."""
    items = []
    for section, values in config.model_dump().items():
        for name, value in values.items():
            if value is not None:
                items.append((f"{section}.{name}", format_value(value)))
    return items


def serialize_config(config: ExperimentConfig) -> str:
    current = None
    out = []
    for key, text in config_items(config):
        section = key.split(".", 1)[0]
        if section != current:
            if current is not None:
                out.append("")
            current = section
        out.append(f"{key} = {text}")
    return "\n".join(out) + "\n"


def config_from_manifest(path: Union[str, Path]) -> ExperimentConfig:
    """Rebuild the configuration snapshot stored as config.* keys in a manifest."""
    from .manifest import RunManifest

    manifest = RunManifest.read(path)
    if not manifest.config:
        raise ParseError(f"{path} holds no config.* keys")
    text = "\n".join(f"{key} = {value}" for key, value in manifest.config.items())
    return parse_config_text(text, source=str(path))
