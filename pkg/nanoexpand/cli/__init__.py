"""
CLI Module

Configuration files, run manifests and the subcommand workflows.
"""

from .config import (
    ExperimentConfig,
    ParticleSection,
    GasSection,
    TrapSection,
    ModulationSection,
    FeedbackSection,
    SimSection,
    AnalysisSection,
    CalibrationSection,
    parse_config,
    parse_config_text,
    serialize_config,
    config_from_manifest,
    resolve_config_path,
)
from .manifest import RunManifest, sha256_file
from .commands import (
    run_simulate,
    run_oracle,
    run_calibrate,
    run_analyze,
    run_protocol,
    oracle_report,
    read_trajectory,
    read_trajectory_dir,
    synthetic_record,
)

__all__ = [
    "ExperimentConfig",
    "ParticleSection",
    "GasSection",
    "TrapSection",
    "ModulationSection",
    "FeedbackSection",
    "SimSection",
    "AnalysisSection",
    "CalibrationSection",
    "parse_config",
    "parse_config_text",
    "serialize_config",
    "config_from_manifest",
    "resolve_config_path",
    "RunManifest",
    "sha256_file",
    "run_simulate",
    "run_oracle",
    "run_calibrate",
    "run_analyze",
    "run_protocol",
    "oracle_report",
    "read_trajectory",
    "read_trajectory_dir",
    "synthetic_record",
]
