"""
Tests for training helpers, policy comparisons, sweeps and the benchmark.
"""

import pandas as pd
import pytest

from src.config import config
from src.core.exceptions import EmptyDatasetError, InvalidConfigError
from src.core.settings import ClassifierMode, SchedulingPolicy
from src.models import SchemaId
from src.modules.classifier import TrainingConfig
from src.modules.data import GAIN_COLUMNS, METRICS_COLUMNS, read_trace, sessions_from_trace
from src.modules.simulation import (
    RunSpec,
    WorkloadConfig,
    benchmark_classifier_modes,
    classifier_dataset,
    compare_chunk_modes,
    compare_policies,
    end_of_session_baseline,
    full_session_dataset,
    gain_by_session_count,
    generate_workload,
    predictor_dataset,
    split_sessions,
    sweep_alert_thresholds,
    sweep_thresholds,
    train_models,
)

SMALL = WorkloadConfig(session_count=30, bully_fraction=0.3, creation_horizon=1500, rng_seed=3)


@pytest.fixture(scope="module")
def sample_trace():
    return read_trace(config.paths.sample_trace_path)


@pytest.fixture(scope="module")
def models(sample_trace, bundled_lexicon):
    return train_models(sample_trace, bundled_lexicon, TrainingConfig(epochs=300))


@pytest.fixture(scope="module")
def small_trace():
    return generate_workload(SMALL)


class TestTrainingHelpers:
    """Datasets and model training."""

    def test_split_is_seeded_and_disjoint(self, sample_trace):
        """Same seed, same split; no session on both sides."""
        sessions = sessions_from_trace(sample_trace)
        train_a, hold_a = split_sessions(sessions, 0.25, seed=1)
        train_b, hold_b = split_sessions(sessions, 0.25, seed=1)
        assert [s.session_id for s in hold_a] == [s.session_id for s in hold_b]
        assert len(hold_a) == 10
        assert not {s.session_id for s in train_a} & {s.session_id for s in hold_a}

    def test_split_validation(self, sample_trace):
        """Holdout fraction must be below one."""
        with pytest.raises(InvalidConfigError):
            split_sessions(sessions_from_trace(sample_trace), 1.0)

    def test_datasets(self, sample_trace, bundled_lexicon):
        """Predictor, prefix and full-session datasets."""
        sessions = sessions_from_trace(sample_trace)
        predictor = predictor_dataset(sessions, bundled_lexicon)
        prefixes = classifier_dataset(sessions, bundled_lexicon, step=10)
        full = full_session_dataset(sessions, bundled_lexicon)
        assert len(predictor) == len(full) == 40
        assert len(prefixes) > len(full)
        assert predictor[0][0].schema_id == SchemaId.PREDICTOR_V1
        assert full[0][0].schema_id == SchemaId.MAIN_V1

    def test_train_models(self, models):
        """Both models come back bound to their schemas, the predictor tuned."""
        assert models.predictor.schema_id == SchemaId.PREDICTOR_V1
        assert models.classifier.schema_id == SchemaId.MAIN_V1
        assert 0.0 < models.predictor.threshold < 1.0

    def test_train_needs_labels(self, bundled_lexicon):
        """Fewer than two labeled sessions cannot train."""
        with pytest.raises(EmptyDatasetError):
            train_models([], bundled_lexicon)

    def test_end_of_session_baseline(self, sample_trace, models, bundled_lexicon):
        """The main classifier separates complete sample sessions."""
        score = end_of_session_baseline(sample_trace, models.classifier, bundled_lexicon)
        assert score.recall >= 0.8
        assert score.precision >= 0.8


class TestComparisons:
    """Policy, chunking and alert-threshold comparisons."""

    def test_compare_policies(self, small_trace, models, bundled_lexicon):
        """One metrics row per policy; round-robin has gain 1 against itself."""
        table = compare_policies(small_trace, models, bundled_lexicon)
        assert list(table.columns) == METRICS_COLUMNS
        assert set(table["policy"]) == {p.value for p in SchedulingPolicy}
        rr = table[table["policy"] == "round-robin"].iloc[0]
        if not pd.isna(rr["mean_gain"]):
            assert rr["mean_gain"] == pytest.approx(1.0)

    def test_compare_chunk_modes(self, small_trace, models, bundled_lexicon):
        """One row per k."""
        table = compare_chunk_modes(small_trace, models, bundled_lexicon, ks=(1, 2))
        assert list(table["k"]) == [1, 2]
        assert list(table.columns) == ["k", "mean_gain", "sessions_compared"]

    def test_sweep_alert_thresholds(self, small_trace, models, bundled_lexicon):
        """Higher thresholds never raise more alerts."""
        table = sweep_alert_thresholds(small_trace, models, bundled_lexicon, thresholds=(1, 2, 3))
        alerts = list(table["alerts"])
        assert alerts == sorted(alerts, reverse=True)

    def test_gain_by_session_count(self, models, bundled_lexicon):
        """One row per workload size."""
        table = gain_by_session_count(SMALL, [10, 20], models, bundled_lexicon)
        assert list(table["session_count"]) == [10, 20]


class TestSweep:
    """Threshold × batch-size grid."""

    def test_grid(self, small_trace, models, bundled_lexicon):
        """One row per cell in grid order."""
        table = sweep_thresholds(small_trace, models, bundled_lexicon, [0.1, 0.3], [5, 10])
        assert list(table.columns) == GAIN_COLUMNS
        assert list(zip(table["confidence_threshold"], table["batch_size"])) == [
            (0.1, 5), (0.1, 10), (0.3, 5), (0.3, 10)
        ]

    def test_empty_grid(self, small_trace, models, bundled_lexicon):
        """An empty list is a configuration error."""
        with pytest.raises(InvalidConfigError):
            sweep_thresholds(small_trace, models, bundled_lexicon, [], [10])

    @pytest.mark.slow
    def test_workers_match_serial(self, small_trace, models, bundled_lexicon):
        """Parallel cells merge to the serial table."""
        serial = sweep_thresholds(small_trace, models, bundled_lexicon, [0.2], [5, 10], workers=1)
        parallel = sweep_thresholds(small_trace, models, bundled_lexicon, [0.2], [5, 10], workers=2)
        pd.testing.assert_frame_equal(serial, parallel)

    def test_spec_replace(self):
        """RunSpec copies with changes."""
        spec = RunSpec().replace(policy=SchedulingPolicy.STATIC, alert_threshold=3)
        assert spec.policy == SchedulingPolicy.STATIC
        assert spec.alert_threshold == 3
        assert spec.classifier_mode == ClassifierMode.INCREMENTAL


class TestBenchmark:
    """Incremental vs standard timing."""

    def test_report(self, models, bundled_lexicon):
        """Both modes time every batch; standard work grows with the prefix."""
        workload = WorkloadConfig(session_count=5, min_comments=40, mean_extra_comments=0.0,
                                  bully_min_comments=40, rng_seed=2)
        sessions = sessions_from_trace(generate_workload(workload))
        report = benchmark_classifier_modes(sessions, models.classifier, bundled_lexicon, batch_size=10)

        assert set(report.totals()) == {"incremental", "standard"}
        work = report.per_batch_work()
        assert list(work["incremental"]) == [10, 10, 10, 10]
        assert list(work["standard"]) == [10, 20, 30, 40]
        assert report.speedup > 0
        assert list(report.per_batch_median().index) == [1, 2, 3, 4]
