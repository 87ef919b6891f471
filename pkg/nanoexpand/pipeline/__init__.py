"""
Pipeline Module

Composable measurement chain over ensembles of position records.
"""

from .analysis_pipeline import (
    SignalBundle,
    ProcessingContext,
    PipelineStage,
    GridValidationStage,
    BandpassStage,
    DifferentiationStage,
    EnsembleStatsStage,
    AnalysisPipeline,
    create_default_pipeline,
    create_raw_pipeline,
)

__all__ = [
    "SignalBundle",
    "ProcessingContext",
    "PipelineStage",
    "GridValidationStage",
    "BandpassStage",
    "DifferentiationStage",
    "EnsembleStatsStage",
    "AnalysisPipeline",
    "create_default_pipeline",
    "create_raw_pipeline",
]
