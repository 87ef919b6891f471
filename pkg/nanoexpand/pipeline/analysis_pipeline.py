#!/usr/bin/env python3

"""
Composable Analysis Pipeline

The measurement chain applied to an ensemble of position records:
grid validation, optional band-pass, differentiation and ensemble
statistics. Every stage returns a Result so a failing stage stops the chain
with a readable message instead of an exception.
"""

import time
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

import numpy as np

from ..analysis import EnsembleStats, ensemble_stats_from_arrays
from ..dsp import bandpass, differentiate
from ..functional.result_monad import Failure, Result, Success, from_callable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignalBundle:
    """Immutable ensemble record: positions (runs x samples), optional velocities"""
    positions: np.ndarray
    sample_period: float
    velocities: Optional[np.ndarray] = None
    stats: Optional[EnsembleStats] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def sample_rate(self) -> float:
        return 1.0 / self.sample_period

    @property
    def run_count(self) -> int:
        return int(self.positions.shape[0])

    def with_positions(self, positions: np.ndarray) -> 'SignalBundle':
        return replace(self, positions=positions)

    def with_velocities(self, velocities: np.ndarray) -> 'SignalBundle':
        return replace(self, velocities=velocities)

    def with_stats(self, stats: EnsembleStats) -> 'SignalBundle':
        return replace(self, stats=stats)

    def with_metadata(self, **metadata) -> 'SignalBundle':
        return replace(self, metadata={**self.metadata, **metadata})


@dataclass(frozen=True)
class ProcessingContext:
    """Per-run bookkeeping: identifier and wall time spent in each stage"""
    run_id: str
    started_at: float = field(default_factory=time.time)
    stage_metrics: Dict[str, float] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def with_stage_metric(self, stage: str, duration: float) -> 'ProcessingContext':
        return replace(self, stage_metrics={**self.stage_metrics, stage: duration})

    def with_metadata(self, **metadata) -> 'ProcessingContext':
        return replace(self, metadata={**self.metadata, **metadata})


class PipelineStage(ABC):
    """Abstract base class for pipeline stages"""

    @property
    @abstractmethod
    def name(self) -> str:
        pass

    @abstractmethod
    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        pass

    @abstractmethod
    def can_process(self, bundle: SignalBundle, context: ProcessingContext) -> bool:
        pass


class GridValidationStage(PipelineStage):
    """Checks shapes, finiteness and the sample period"""

    @property
    def name(self) -> str:
        return "grid_validation"

    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        positions = bundle.positions
        if positions.ndim != 2:
            return Failure(f"positions must be runs x samples, got shape {positions.shape}")
        if positions.shape[0] < 2:
            return Failure(f"at least 2 runs are required, got {positions.shape[0]}")
        if not bundle.sample_period > 0:
            return Failure(f"sample period must be > 0, got {bundle.sample_period}")
        if bundle.velocities is not None and bundle.velocities.shape != positions.shape:
            return Failure(f"velocities {bundle.velocities.shape} do not match positions {positions.shape}")
        if not np.all(np.isfinite(positions)):
            return Failure("positions contain non-finite samples")

        logger.debug(f"Grid validation passed: {positions.shape[0]} runs x {positions.shape[1]} samples")
        return Success(bundle.with_metadata(validated=True))

    def can_process(self, bundle: SignalBundle, context: ProcessingContext) -> bool:
        return True


class BandpassStage(PipelineStage):
    """Causal Butterworth band-pass around the trap frequency"""

    def __init__(self, center: float, bandwidth: float = 14e3, order: int = 3, enabled: bool = True):
        self.center = center
        self.bandwidth = bandwidth
        self.order = order
        self.enabled = enabled

    @property
    def name(self) -> str:
        return "bandpass"

    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        filtered = from_callable(
            lambda: bandpass(bundle.positions, bundle.sample_rate, self.center, self.bandwidth, self.order),
            lambda e: f"Band-pass failed: {e}",
        )
        return filtered.map(lambda positions: bundle.with_positions(positions).with_metadata(
            bandpass_center_hz=self.center,
            bandpass_width_hz=self.bandwidth,
            bandpass_order=self.order,
        ))

    def can_process(self, bundle: SignalBundle, context: ProcessingContext) -> bool:
        return self.enabled


class DifferentiationStage(PipelineStage):
    """Velocities from positions by central differences"""

    def __init__(self, enabled: bool = True):
        self.enabled = enabled

    @property
    def name(self) -> str:
        return "differentiation"

    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        velocities = from_callable(
            lambda: differentiate(bundle.positions, bundle.sample_period),
            lambda e: f"Differentiation failed: {e}",
        )
        return velocities.map(lambda v: bundle.with_velocities(v).with_metadata(velocities_inferred=True))

    def can_process(self, bundle: SignalBundle, context: ProcessingContext) -> bool:
        return self.enabled or bundle.velocities is None


class EnsembleStatsStage(PipelineStage):
    """Per-time sigma_z, sigma_v and cov_zv across the runs"""

    @property
    def name(self) -> str:
        return "ensemble_stats"

    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        stats = from_callable(
            lambda: ensemble_stats_from_arrays(bundle.positions, bundle.velocities, bundle.sample_period),
            lambda e: f"Ensemble statistics failed: {e}",
        )
        return stats.map(bundle.with_stats)

    def can_process(self, bundle: SignalBundle, context: ProcessingContext) -> bool:
        return bundle.velocities is not None


class AnalysisPipeline:
    """Sequential chain of stages"""

    def __init__(self):
        self.stages: List[PipelineStage] = []
        self.last_context: Optional[ProcessingContext] = None

    def add_stage(self, stage: PipelineStage) -> 'AnalysisPipeline':
        self.stages.append(stage)
        return self

    @property
    def stage_names(self) -> List[str]:
        return [stage.name for stage in self.stages]

    def process(self, bundle: SignalBundle, context: ProcessingContext) -> Result[SignalBundle, str]:
        current = bundle
        current_context = context

        for stage in self.stages:
            if not stage.can_process(current, current_context):
                logger.debug(f"Skipping stage {stage.name}")
                continue
            stage_started = time.time()
            stage_result = stage.process(current, current_context)
            if stage_result.is_failure():
                logger.error(f"Stage {stage.name} failed: {stage_result.get_error()}")
                self.last_context = current_context
                return stage_result
            current = stage_result.get_value()
            current_context = current_context.with_stage_metric(stage.name, time.time() - stage_started)

        total = time.time() - context.started_at
        self.last_context = current_context
        logger.info(f"Analysis pipeline '{context.run_id}' completed in {total:.2f}s")
        return Success(current.with_metadata(pipeline_completed=True, total_processing_time=total))


def create_default_pipeline(trap_frequency_hz: float, bandpass_enabled: bool = False,
                            bandpass_width_hz: float = 14e3, bandpass_order: int = 3,
                            differentiate_positions: bool = True,
                            bandpass_center_hz: Optional[float] = None) -> AnalysisPipeline:
    """Validation, optional band-pass, differentiation, statistics."""
    center = bandpass_center_hz if bandpass_center_hz else trap_frequency_hz
    return (AnalysisPipeline()
            .add_stage(GridValidationStage())
            .add_stage(BandpassStage(center, bandpass_width_hz, bandpass_order, enabled=bandpass_enabled))
            .add_stage(DifferentiationStage(enabled=differentiate_positions or bandpass_enabled))
            .add_stage(EnsembleStatsStage()))


def create_raw_pipeline() -> AnalysisPipeline:
    """Statistics of the records exactly as given (velocities required)."""
    return (AnalysisPipeline()
            .add_stage(GridValidationStage())
            .add_stage(EnsembleStatsStage()))
