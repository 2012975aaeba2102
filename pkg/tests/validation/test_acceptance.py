"""
End-to-end validation experiments.
Equivalence, cost shape, scheduler guarantees, alert quality and
responsiveness gain on seeded synthetic workloads.
"""

import math

import numpy as np
import pytest
from loguru import logger

from src.core.settings import ClassifierMode, SchedulingPolicy
from src.models import Classification, FeatureVector, Priority, SchemaId
from src.modules.classifier import (
    TrainingConfig,
    evaluate,
    load_model,
    log_loss_and_gradient,
    predict,
    predict_incremental,
    save_model,
    train,
)
from src.modules.data import sessions_from_trace
from src.modules.features import extract_batch, extract_delta, fold_delta, prime_features
from src.modules.scheduler import DynamicPriorityScheduler, setting_priority
from src.modules.simulation import (
    RunSpec,
    WorkloadConfig,
    benchmark_classifier_modes,
    end_of_session_baseline,
    generate_workload,
    responsiveness_gain,
    run_spec,
    score_alerts,
    sweep_thresholds,
    train_models,
)

pytestmark = pytest.mark.slow

TRAINING_WORKLOAD = WorkloadConfig(session_count=2000, bully_fraction=0.05, rng_seed=101)
# 10,000 sessions over 300,000 ticks overload the server while keeping
# admissions under one per classification visit
SMALL_LOAD = WorkloadConfig(session_count=1000, bully_fraction=0.05, creation_horizon=300_000, rng_seed=202)
LARGE_LOAD = SMALL_LOAD.with_overrides(session_count=10_000)
BURST_LOAD = SMALL_LOAD.with_overrides(session_count=5000, creation_horizon=150_000, rng_seed=606)
PREDICTOR_PRECISION = 0.44


@pytest.fixture(scope="module")
def models(bundled_lexicon):
    return train_models(generate_workload(TRAINING_WORKLOAD), bundled_lexicon, min_precision=PREDICTOR_PRECISION)


@pytest.fixture(scope="module")
def small_trace():
    return generate_workload(SMALL_LOAD)


@pytest.fixture(scope="module")
def large_trace():
    return generate_workload(LARGE_LOAD)


@pytest.fixture(scope="module")
def large_runs(large_trace, models, bundled_lexicon):
    spec = RunSpec()
    return {
        policy: run_spec(large_trace, models, bundled_lexicon, spec.replace(policy=policy))
        for policy in SchedulingPolicy
    }


class TestIncrementalEquivalence:
    """Folded features and incremental inference against full recomputation."""

    def test_random_partitions(self, models, bundled_lexicon):
        """≥100 sessions, up to 1000 comments, random batch partitions."""
        workload = WorkloadConfig(session_count=120, bully_fraction=0.2, min_comments=50,
                                  mean_extra_comments=400.0, rng_seed=303)
        rng = np.random.default_rng(17)
        sessions = sessions_from_trace(generate_workload(workload))
        assert len(sessions) >= 100

        for session in sessions:
            del session.comments[1000:]
            prime_features(session, bundled_lexicon)
            while session.unprocessed_count:
                size = int(min(rng.integers(1, 40), session.unprocessed_count))
                start = session.processed_count
                features = fold_delta(
                    session, extract_delta(session.comments[start:start + size], bundled_lexicon), size
                )
                incremental = predict_incremental(models.classifier, session, features)
                full_features = extract_batch(session, session.processed_count, bundled_lexicon)
                full = predict(models.classifier, full_features)

                assert incremental.decision == full.decision
                assert abs(incremental.confidence - full.confidence) <= 1e-12
                assert all(abs(a - b) <= 1e-9 for a, b in zip(features.values, full_features.values))


class TestCostShape:
    """Per-batch work stays flat for incremental classification."""

    def test_constant_per_batch(self, models, bundled_lexicon):
        """Batch 50 within 2× of batch 5 incrementally; ≥5× for standard."""
        workload = WorkloadConfig(session_count=200, min_comments=500, mean_extra_comments=0.0,
                                  bully_min_comments=500, rng_seed=404)
        sessions = sessions_from_trace(generate_workload(workload))
        report = benchmark_classifier_modes(sessions, models.classifier, bundled_lexicon, batch_size=10)
        medians = report.per_batch_median()

        incremental = medians["incremental"]
        standard = medians["standard"]
        logger.info(
            f"batch 5/50 incremental {incremental[5]:.2e}/{incremental[50]:.2e}s, "
            f"standard {standard[5]:.2e}/{standard[50]:.2e}s"
        )
        assert incremental[50] <= 2.0 * incremental[5]
        assert standard[50] >= 5.0 * standard[5]

        work = report.per_batch_work()
        assert work["incremental"].nunique() == 1
        assert work["standard"][50] == 10 * work["standard"][5]

    def test_total_speedup(self, models, bundled_lexicon):
        """Incremental total time ≤ 1/5 of standard over 5000 sessions of 500 comments."""
        workload = WorkloadConfig(session_count=5000, min_comments=500, mean_extra_comments=0.0,
                                  bully_min_comments=500, rng_seed=505)
        sessions = sessions_from_trace(generate_workload(workload))
        report = benchmark_classifier_modes(sessions, models.classifier, bundled_lexicon, batch_size=10)
        logger.info(f"speedup {report.speedup:.1f}x")
        assert report.speedup >= 5.0


class TestSchedulerGuarantees:
    """Queue walkthrough and starvation bound."""

    def test_walkthrough(self):
        """M1, M2 HIGH and M3 LOW; M1 comes back LOW, M2 HIGH."""
        scheduler = DynamicPriorityScheduler()
        scheduler.admit("M1", Priority.HIGH)
        scheduler.admit("M2", Priority.HIGH)
        scheduler.admit("M3", Priority.LOW)
        requeue = {"M1": Priority.LOW, "M2": Priority.HIGH, "M3": Priority.LOW}

        order = []
        for _ in range(4):
            sid = scheduler.next()
            order.append(sid)
            scheduler.requeue(sid, requeue[sid])
        assert order == ["M1", "M2", "M3", "M2"]
        assert scheduler.rotations == 1

    @pytest.mark.parametrize("seed", range(5))
    def test_starvation_bound_fuzz(self, seed):
        """Every session is served within two rotations of its admission or last service."""
        rng = np.random.default_rng(seed)
        scheduler = DynamicPriorityScheduler()
        since = {}
        admitted = 0
        for _ in range(10_000):
            if rng.random() < 0.05 or admitted == 0:
                sid = f"s{admitted}"
                admitted += 1
                scheduler.admit(sid, Priority.HIGH if rng.random() < 0.7 else Priority.LOW)
                since[sid] = scheduler.rotations
            sid = scheduler.next()
            assert scheduler.rotations - since[sid] <= 2
            # adversary: mostly HIGH requeues keep the upper queues full
            scheduler.requeue(sid, Priority.HIGH if rng.random() < 0.9 else Priority.LOW)
            since[sid] = scheduler.rotations


class TestSettingPriority:
    """Mean-confidence threshold rule."""

    def test_worked_example_and_boundary(self, make_session):
        """[0.15, 0.15, 0.45] is HIGH; a mean of exactly 0.2 is HIGH."""
        session = make_session()
        for t, c in enumerate([0.15, 0.15, 0.45]):
            session.record_decision(t, Classification(False, c))
        assert setting_priority(session, 0.2) == Priority.HIGH

        boundary = make_session("b")
        boundary.record_decision(0, Classification(False, 0.2))
        boundary.record_decision(1, Classification(False, 0.2))
        assert setting_priority(boundary, 0.2) == Priority.HIGH

    def test_property(self, make_session):
        """HIGH ⇔ mean ≥ 0.2 over random histories."""
        rng = np.random.default_rng(6)
        for i in range(2000):
            session = make_session(f"p{i}")
            values = rng.random(int(rng.integers(1, 20))) * rng.choice([0.3, 1.0])
            for t, c in enumerate(values):
                session.record_decision(t, Classification(False, float(c)))
            expected = Priority.HIGH if session.confidence_history.mean() >= 0.2 else Priority.LOW
            assert setting_priority(session, 0.2) == expected
            assert math.isclose(session.confidence_history.mean(), float(np.mean(values)), rel_tol=1e-12)


class TestAlertQuality:
    """Streaming alerts against single-shot classification."""

    def test_alert_recall_vs_end_of_session(self, small_trace, models, bundled_lexicon):
        """Two-positive alerts recall at least as many bullies as end-of-session classification."""
        result = run_spec(small_trace, models, bundled_lexicon, RunSpec())
        streaming = score_alerts(result)
        single_shot = end_of_session_baseline(small_trace, models.classifier, bundled_lexicon)
        logger.info(f"alert recall {streaming.recall:.3f} vs end-of-session {single_shot.recall:.3f}")
        assert streaming.recall >= single_shot.recall


class TestResponsivenessGain:
    """Dynamic scheduling against round-robin."""

    def test_gain_at_scale(self, large_runs):
        """Mean time-to-first-alert gain over true bullies ≥ 2 at 10,000 sessions."""
        gain = responsiveness_gain(large_runs[SchedulingPolicy.ROUND_ROBIN], large_runs[SchedulingPolicy.DYNAMIC])
        logger.info(f"gain {gain.mean:.2f} over {gain.sessions_compared} sessions")
        assert gain.sessions_compared > 0
        assert gain.mean >= 2.0

    def test_gain_grows_with_load(self, small_trace, large_runs, models, bundled_lexicon):
        """Gain at 10,000 sessions is at least the gain at 1,000."""
        spec = RunSpec()
        small_gain = responsiveness_gain(
            run_spec(small_trace, models, bundled_lexicon, spec.replace(policy=SchedulingPolicy.ROUND_ROBIN)),
            run_spec(small_trace, models, bundled_lexicon, spec.replace(policy=SchedulingPolicy.DYNAMIC)),
        )
        large_gain = responsiveness_gain(
            large_runs[SchedulingPolicy.ROUND_ROBIN], large_runs[SchedulingPolicy.DYNAMIC]
        )
        logger.info(f"gain {small_gain.mean:.2f} at 1k, {large_gain.mean:.2f} at 10k")
        assert large_gain.mean >= small_gain.mean

    def test_static_recall_deficit(self, large_runs):
        """Serving only initially-HIGH sessions misses bullies."""
        static = score_alerts(large_runs[SchedulingPolicy.STATIC])
        dynamic = score_alerts(large_runs[SchedulingPolicy.DYNAMIC])
        logger.info(f"recall static {static.recall:.3f}, dynamic {dynamic.recall:.3f}")
        assert static.recall < dynamic.recall

    def test_modes_share_alert_stream(self, small_trace, models, bundled_lexicon):
        """Incremental and standard modes raise identical alerts under equal costs."""
        spec = RunSpec()
        incremental = run_spec(small_trace, models, bundled_lexicon, spec)
        standard = run_spec(small_trace, models, bundled_lexicon,
                            spec.replace(classifier_mode=ClassifierMode.STANDARD))
        assert incremental.alerts == standard.alerts

    def test_small_batches_keep_bursts(self, models, bundled_lexicon):
        """Gain at batch 10 is at least the gain at batch 30 under overload."""
        table = sweep_thresholds(generate_workload(BURST_LOAD), models, bundled_lexicon, [0.2], [10, 30])
        gains = dict(zip(table["batch_size"], table["mean_gain"]))
        logger.info(f"gain by batch size: {gains}")
        assert gains[10] >= gains[30]


class TestTraining:
    """Gradient correctness, separable data and model files."""

    def test_gradient_fuzz(self):
        """Analytic gradients match central differences on 20 random instances."""
        rng = np.random.default_rng(8)
        for _ in range(20):
            m, d = int(rng.integers(5, 30)), int(rng.integers(1, 6))
            X = rng.normal(size=(m, d))
            y = (rng.random(m) < 0.5).astype(float)
            w = rng.normal(size=d)
            b = float(rng.normal())
            l2 = float(rng.random() * 0.1)
            _, grad_w, grad_b = log_loss_and_gradient(w, b, X, y, l2)

            eps = 1e-6
            numeric = []
            for i in range(d):
                step = np.zeros(d)
                step[i] = eps
                numeric.append(
                    (log_loss_and_gradient(w + step, b, X, y, l2)[0]
                     - log_loss_and_gradient(w - step, b, X, y, l2)[0]) / (2 * eps)
                )
            numeric_b = (log_loss_and_gradient(w, b + eps, X, y, l2)[0]
                         - log_loss_and_gradient(w, b - eps, X, y, l2)[0]) / (2 * eps)
            for analytic, approx in zip(list(grad_w) + [grad_b], numeric + [numeric_b]):
                assert abs(analytic - approx) <= 1e-5 * max(abs(approx), 1e-3)

    def test_separable_accuracy_and_round_trip(self, tmp_path):
        """Separable data trains to ≥ 0.95 accuracy; the model file reloads bitwise."""
        rng = np.random.default_rng(9)
        dataset = []
        for i in range(200):
            label = bool(i % 2)
            values = rng.normal(size=5)
            values[3] = abs(values[3]) + 0.5 if label else -abs(values[3]) - 0.5
            dataset.append((FeatureVector(values=tuple(float(v) for v in values),
                                          schema_id=SchemaId.PREDICTOR_V1), label))
        model = train(dataset, TrainingConfig())
        assert evaluate(model, dataset).accuracy >= 0.95

        path = save_model(model, tmp_path / "model.json")
        reloaded = load_model(path)
        assert reloaded == model
        assert save_model(reloaded, tmp_path / "again.json").read_bytes() == path.read_bytes()
