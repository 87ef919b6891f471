#!/usr/bin/env python3

"""
Analysis Pipeline Unit Tests
"""

import numpy as np
import pytest

from nanoexpand.pipeline import (
    AnalysisPipeline,
    BandpassStage,
    DifferentiationStage,
    EnsembleStatsStage,
    GridValidationStage,
    ProcessingContext,
    SignalBundle,
    create_default_pipeline,
    create_raw_pipeline,
)

from tests.test_utils import assert_result_failure, assert_result_success, damped_oscillation

F_Z = 77.6e3
PERIOD = 5e-7


@pytest.fixture
def records():
    """Three phase-shifted oscillations at f_z"""
    return np.vstack([damped_oscillation(F_Z, 1 / PERIOD, 400, phase=phase) for phase in (0.0, 1.0, 2.0)])


@pytest.fixture
def context():
    return ProcessingContext(run_id="test-run")


@pytest.mark.pipeline
class TestStages:
    """Individual stages"""

    def test_grid_validation_accepts_ensemble(self, records, context):
        """Test a well-formed bundle passes and is marked validated"""
        result = GridValidationStage().process(SignalBundle(records, PERIOD), context)
        bundle = assert_result_success(result)
        assert bundle.metadata["validated"] is True

    @pytest.mark.parametrize("positions,period,message", [
        (np.zeros(10), PERIOD, "runs x samples"),
        (np.zeros((1, 10)), PERIOD, "at least 2 runs"),
        (np.zeros((3, 10)), 0.0, "sample period"),
        (np.array([[0.0, np.nan], [0.0, 0.0]]), PERIOD, "non-finite"),
    ])
    def test_grid_validation_failures(self, positions, period, message, context):
        """Test malformed bundles fail with a readable message"""
        assert_result_failure(GridValidationStage().process(SignalBundle(positions, period), context),
                              contains=message)

    def test_velocity_shape_mismatch(self, records, context):
        """Test velocities must match the positions"""
        bundle = SignalBundle(records, PERIOD, velocities=np.zeros((3, 5)))
        assert_result_failure(GridValidationStage().process(bundle, context), contains="do not match")

    def test_differentiation_stage(self, records, context):
        """Test inferred velocities equal central differences"""
        bundle = assert_result_success(DifferentiationStage().process(SignalBundle(records, PERIOD), context))
        assert np.allclose(bundle.velocities, np.gradient(records, PERIOD, axis=-1, edge_order=1))
        assert bundle.metadata["velocities_inferred"] is True

    def test_differentiation_too_short(self, context):
        """Test two-sample records cannot be differentiated"""
        result = DifferentiationStage().process(SignalBundle(np.zeros((3, 2)), PERIOD), context)
        assert_result_failure(result, contains="Differentiation failed")

    def test_bandpass_stage_reports_invalid_band(self, records, context):
        """Test a band above Nyquist fails the stage"""
        result = BandpassStage(center=0.999e6).process(SignalBundle(records, PERIOD), context)
        assert_result_failure(result, contains="Band-pass failed")

    def test_bandpass_stage_records_settings(self, records, context):
        """Test the filter settings are kept in the metadata"""
        bundle = assert_result_success(BandpassStage(F_Z, 2e4, 2).process(SignalBundle(records, PERIOD), context))
        assert bundle.metadata["bandpass_order"] == 2
        assert bundle.positions.shape == records.shape

    def test_stats_stage_needs_velocities(self, records, context):
        """Test statistics are skipped without velocities"""
        stage = EnsembleStatsStage()
        assert not stage.can_process(SignalBundle(records, PERIOD), context)
        bundle = assert_result_success(stage.process(SignalBundle(records, PERIOD, velocities=records), context))
        assert bundle.stats.run_count == 3


@pytest.mark.pipeline
class TestAnalysisPipeline:
    """Composition of stages"""

    def test_default_pipeline_stage_order(self):
        """Test the default chain"""
        pipeline = create_default_pipeline(F_Z)
        assert pipeline.stage_names == ["grid_validation", "bandpass", "differentiation", "ensemble_stats"]
        assert create_raw_pipeline().stage_names == ["grid_validation", "ensemble_stats"]

    def test_default_pipeline_produces_stats(self, records, context):
        """Test the chain runs end to end and records stage timings"""
        pipeline = create_default_pipeline(F_Z)
        bundle = assert_result_success(pipeline.process(SignalBundle(records, PERIOD), context))
        assert bundle.stats is not None
        assert bundle.stats.sigma_z.shape == (400,)
        assert bundle.metadata["pipeline_completed"] is True
        assert "bandpass" not in pipeline.last_context.stage_metrics
        assert set(pipeline.last_context.stage_metrics) == {"grid_validation", "differentiation", "ensemble_stats"}

    def test_given_velocities_kept(self, records, context):
        """Test simulator velocities are used when differentiation is off"""
        velocities = np.ones_like(records)
        pipeline = create_default_pipeline(F_Z, differentiate_positions=False)
        bundle = assert_result_success(pipeline.process(SignalBundle(records, PERIOD, velocities), context))
        assert bundle.velocities is velocities
        assert not np.any(bundle.stats.sigma_v)

    def test_missing_velocities_are_inferred(self, records, context):
        """Test differentiation runs when no velocities are given"""
        pipeline = create_default_pipeline(F_Z, differentiate_positions=False)
        bundle = assert_result_success(pipeline.process(SignalBundle(records, PERIOD), context))
        assert bundle.metadata["velocities_inferred"] is True

    def test_bandpass_forces_differentiation(self, records, context):
        """Test filtered positions get matching velocities"""
        velocities = np.ones_like(records)
        pipeline = create_default_pipeline(F_Z, bandpass_enabled=True, differentiate_positions=False)
        bundle = assert_result_success(pipeline.process(SignalBundle(records, PERIOD, velocities), context))
        assert bundle.velocities is not velocities
        assert "bandpass" in pipeline.last_context.stage_metrics

    def test_failure_stops_the_chain(self, context):
        """Test the first failing stage ends processing"""
        pipeline = create_raw_pipeline()
        result = pipeline.process(SignalBundle(np.zeros((1, 10)), PERIOD, np.zeros((1, 10))), context)
        assert_result_failure(result, contains="at least 2 runs")
        assert pipeline.last_context.stage_metrics == {}

    def test_empty_pipeline_passes_through(self, records, context):
        """Test a pipeline without stages returns the input"""
        bundle = assert_result_success(AnalysisPipeline().process(SignalBundle(records, PERIOD), context))
        assert bundle.positions is records
