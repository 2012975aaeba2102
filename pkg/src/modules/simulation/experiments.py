"""
Experiments.
Model training, policy comparisons, parameter sweeps, baselines and the
incremental-vs-standard benchmark, all built on the detection engine.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger

from src.core.exceptions import EmptyDatasetError, InvalidConfigError
from src.core.settings import ChunkMode, ClassifierMode, SchedulingPolicy
from src.models import FeatureVector, MediaSession
from src.modules.classifier import (
    IncrementalStats,
    LRModel,
    TrainingConfig,
    predict,
    predict_incremental,
    train,
    tune_predictor,
)
from src.modules.data.reports import GAIN_COLUMNS
from src.modules.data.traces import CommentEvent, SessionEvent, sessions_from_trace
from src.modules.features import (
    extract_batch,
    extract_delta,
    extract_predictor_features,
    extract_prefix_examples,
    fold_delta,
    prime_features,
)
from src.modules.scheduler import SchedulerConfig
from src.modules.sentiment import SentimentLexicon
from src.modules.simulation.cost_model import CostModel
from src.modules.simulation.engine import RunResult, run
from src.modules.simulation.metrics import (
    AlertScore,
    metrics_frame,
    responsiveness_gain,
    score_alerts,
    summarize_run,
)
from src.modules.simulation.workload import WorkloadConfig, generate_workload

Event = Union[SessionEvent, CommentEvent]
Dataset = List[Tuple[FeatureVector, bool]]


@dataclass(frozen=True)
class TrainedModels:
    """Initial predictor and main classifier."""
    predictor: LRModel
    classifier: LRModel


@dataclass(frozen=True)
class RunSpec:
    """Everything but the trace that a single engine run needs."""
    policy: SchedulingPolicy = SchedulingPolicy.DYNAMIC
    classifier_mode: ClassifierMode = ClassifierMode.INCREMENTAL
    scheduler_config: SchedulerConfig = field(default_factory=SchedulerConfig)
    cost_model: CostModel = field(default_factory=CostModel)
    alert_threshold: int = 2

    def replace(self, **changes) -> "RunSpec":
        values = {
            "policy": self.policy,
            "classifier_mode": self.classifier_mode,
            "scheduler_config": self.scheduler_config,
            "cost_model": self.cost_model,
            "alert_threshold": self.alert_threshold,
        }
        values.update(changes)
        return RunSpec(**values)


def run_spec(trace: Sequence[Event], models: TrainedModels, lexicon: SentimentLexicon, spec: RunSpec) -> RunResult:
    return run(
        trace,
        models.predictor,
        models.classifier,
        lexicon,
        policy=spec.policy,
        classifier_mode=spec.classifier_mode,
        scheduler_config=spec.scheduler_config,
        cost_model=spec.cost_model,
        alert_threshold=spec.alert_threshold,
    )


# ----------------------------------------------------------------------
# Training
# ----------------------------------------------------------------------

def _as_sessions(data: Union[Sequence[Event], Sequence[MediaSession]]) -> List[MediaSession]:
    items = list(data)
    if items and isinstance(items[0], MediaSession):
        return items
    return sessions_from_trace(items)


def split_sessions(
    sessions: Sequence[MediaSession],
    holdout_fraction: float = 0.2,
    seed: int = 7
) -> Tuple[List[MediaSession], List[MediaSession]]:
    """Seeded train/holdout split."""
    if not 0.0 <= holdout_fraction < 1.0:
        raise InvalidConfigError("holdout_fraction", holdout_fraction, "value in [0, 1)")
    order = np.random.default_rng(seed).permutation(len(sessions))
    cut = int(round(len(sessions) * holdout_fraction))
    holdout = sorted(order[:cut].tolist())
    training = sorted(order[cut:].tolist())
    return [sessions[i] for i in training], [sessions[i] for i in holdout]


def predictor_dataset(sessions: Iterable[MediaSession], lexicon: SentimentLexicon) -> Dataset:
    """PREDICTOR_V1 examples for labeled sessions."""
    return [
        (extract_predictor_features(s.poster, s.caption, lexicon), bool(s.ground_truth_label))
        for s in sessions
        if s.ground_truth_label is not None
    ]


def classifier_dataset(sessions: Iterable[MediaSession], lexicon: SentimentLexicon, step: int = 10) -> Dataset:
    """MAIN_V1 prefix examples (every `step` comments plus the full session) for labeled sessions."""
    dataset: Dataset = []
    for s in sessions:
        if s.ground_truth_label is None:
            continue
        label = bool(s.ground_truth_label)
        dataset.extend((vector, label) for vector in extract_prefix_examples(s, lexicon, step))
    return dataset


def full_session_dataset(sessions: Iterable[MediaSession], lexicon: SentimentLexicon) -> Dataset:
    """One MAIN_V1 example per labeled session, over all of its comments."""
    return [
        (extract_batch(s, len(s.comments), lexicon), bool(s.ground_truth_label))
        for s in sessions
        if s.ground_truth_label is not None
    ]


def train_models(
    data: Union[Sequence[Event], Sequence[MediaSession]],
    lexicon: SentimentLexicon,
    config: Optional[TrainingConfig] = None,
    batch_size: int = 10,
    min_precision: float = 0.3
) -> TrainedModels:
    """
    Train the predictor (threshold tuned for recall under a precision floor)
    and the main classifier (on prefix-augmented sessions).
    """
    config = config or TrainingConfig()
    sessions = _as_sessions(data)
    labeled = [s for s in sessions if s.ground_truth_label is not None]
    if len(labeled) < 2:
        raise EmptyDatasetError(len(labeled))

    predictor_data = predictor_dataset(labeled, lexicon)
    predictor = train(predictor_data, config)
    predictor = predictor.with_threshold(tune_predictor(predictor, predictor_data, min_precision))

    classifier = train(classifier_dataset(labeled, lexicon, batch_size), config)
    logger.info(
        f"[TRAIN] Trained on {len(labeled)} sessions "
        f"({sum(1 for s in labeled if s.ground_truth_label)} bullying)"
    )
    return TrainedModels(predictor=predictor, classifier=classifier)


# ----------------------------------------------------------------------
# Baselines and comparisons
# ----------------------------------------------------------------------

def end_of_session_baseline(
    data: Union[Sequence[Event], Sequence[MediaSession]],
    classifier: LRModel,
    lexicon: SentimentLexicon
) -> AlertScore:
    """Single-shot standard classification of every complete session, scored per session."""
    tp = fp = fn = 0
    for vector, label in full_session_dataset(_as_sessions(data), lexicon):
        decision = predict(classifier, vector).decision
        if decision and label:
            tp += 1
        elif decision:
            fp += 1
        elif label:
            fn += 1
    return AlertScore(
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
    )


def compare_policies(
    trace: Sequence[Event],
    models: TrainedModels,
    lexicon: SentimentLexicon,
    spec: Optional[RunSpec] = None,
    policies: Sequence[SchedulingPolicy] = tuple(SchedulingPolicy)
) -> pd.DataFrame:
    """Metrics rows per policy; mean_gain is measured against round-robin."""
    spec = spec or RunSpec()
    results = {
        SchedulingPolicy(p): run_spec(trace, models, lexicon, spec.replace(policy=SchedulingPolicy(p)))
        for p in policies
    }
    baseline = results.get(SchedulingPolicy.ROUND_ROBIN)
    if baseline is None:
        baseline = run_spec(trace, models, lexicon, spec.replace(policy=SchedulingPolicy.ROUND_ROBIN))

    rows = []
    for policy, result in results.items():
        gain = responsiveness_gain(baseline, result)
        rows.append(summarize_run(result, gain.mean))
        logger.info(
            f"[SIM] {policy.value}: recall {rows[-1].recall:.3f}, precision {rows[-1].precision:.3f}, "
            f"gain {gain.mean} over {gain.sessions_compared} sessions"
        )
    return metrics_frame(rows)


def gain_by_session_count(
    workload: WorkloadConfig,
    counts: Sequence[int],
    models: TrainedModels,
    lexicon: SentimentLexicon,
    spec: Optional[RunSpec] = None
) -> pd.DataFrame:
    """Dynamic-over-round-robin gain for workloads of growing size on the same horizon."""
    spec = spec or RunSpec()
    rows = []
    for count in counts:
        trace = generate_workload(workload.with_overrides(session_count=count))
        baseline = run_spec(trace, models, lexicon, spec.replace(policy=SchedulingPolicy.ROUND_ROBIN))
        dynamic = run_spec(trace, models, lexicon, spec.replace(policy=SchedulingPolicy.DYNAMIC))
        gain = responsiveness_gain(baseline, dynamic)
        rows.append({
            "session_count": count,
            "mean_gain": gain.mean,
            "sessions_compared": gain.sessions_compared,
        })
        logger.info(f"[SIM] {count} sessions: gain {gain.mean} over {gain.sessions_compared}")
    return pd.DataFrame(rows, columns=["session_count", "mean_gain", "sessions_compared"])


def compare_chunk_modes(
    trace: Sequence[Event],
    models: TrainedModels,
    lexicon: SentimentLexicon,
    spec: Optional[RunSpec] = None,
    ks: Sequence[int] = (1, 2, 3)
) -> pd.DataFrame:
    """k-th alert gain of capped batches over all-available batches."""
    spec = spec or RunSpec()
    base_config = spec.scheduler_config

    def configured(mode: ChunkMode) -> RunSpec:
        return spec.replace(scheduler_config=SchedulerConfig(
            confidence_threshold=base_config.confidence_threshold,
            batch_size=base_config.batch_size,
            chunk_mode=mode,
        ))

    capped = run_spec(trace, models, lexicon, configured(ChunkMode.CAPPED))
    everything = run_spec(trace, models, lexicon, configured(ChunkMode.ALL_AVAILABLE))
    rows = []
    for k in ks:
        gain = responsiveness_gain(everything, capped, k=k)
        rows.append({"k": k, "mean_gain": gain.mean, "sessions_compared": gain.sessions_compared})
    return pd.DataFrame(rows, columns=["k", "mean_gain", "sessions_compared"])


def sweep_alert_thresholds(
    trace: Sequence[Event],
    models: TrainedModels,
    lexicon: SentimentLexicon,
    thresholds: Sequence[int] = (1, 2, 3),
    spec: Optional[RunSpec] = None
) -> pd.DataFrame:
    """Alert precision/recall per positive-decision threshold."""
    spec = spec or RunSpec()
    rows = []
    for threshold in thresholds:
        result = run_spec(trace, models, lexicon, spec.replace(alert_threshold=threshold))
        score = score_alerts(result)
        rows.append({
            "alert_threshold": threshold,
            "alerts": len(result.alerts),
            "alerted_sessions": len(result.alert_times),
            "precision": score.precision,
            "recall": score.recall,
        })
    return pd.DataFrame(rows, columns=["alert_threshold", "alerts", "alerted_sessions", "precision", "recall"])


# ----------------------------------------------------------------------
# Threshold × batch-size sweep
# ----------------------------------------------------------------------

def _sweep_task(args) -> RunResult:
    trace, models, lexicon, spec = args
    return run_spec(trace, models, lexicon, spec)


def sweep_thresholds(
    trace: Sequence[Event],
    models: TrainedModels,
    lexicon: SentimentLexicon,
    thresholds: Sequence[float],
    batch_sizes: Sequence[int],
    spec: Optional[RunSpec] = None,
    workers: int = 1
) -> pd.DataFrame:
    """
    Mean dynamic-over-round-robin gain for every (confidence_threshold, batch_size) cell.

    Each cell runs on a private engine; with workers > 1 cells run in a
    process pool and are merged back by cell index.

    Raises:
        InvalidConfigError: If the grid is empty
    """
    if not thresholds or not batch_sizes:
        raise InvalidConfigError("grid", f"{list(thresholds)} x {list(batch_sizes)}", "non-empty threshold and batch-size lists")
    spec = spec or RunSpec()
    trace = list(trace)
    chunk_mode = spec.scheduler_config.chunk_mode

    cells = [(float(t), int(b)) for t in thresholds for b in batch_sizes]
    sizes = sorted({b for _, b in cells})
    specs = [
        spec.replace(
            policy=SchedulingPolicy.ROUND_ROBIN,
            scheduler_config=SchedulerConfig(batch_size=b, chunk_mode=chunk_mode),
        )
        for b in sizes
    ] + [
        spec.replace(
            policy=SchedulingPolicy.DYNAMIC,
            scheduler_config=SchedulerConfig(confidence_threshold=t, batch_size=b, chunk_mode=chunk_mode),
        )
        for t, b in cells
    ]
    tasks = [(trace, models, lexicon, s) for s in specs]

    logger.info(f"[SIM] Sweep: {len(cells)} cells, {len(specs)} runs, {workers} worker(s)")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_task, tasks))
    else:
        results = [_sweep_task(task) for task in tasks]

    baselines = dict(zip(sizes, results[:len(sizes)]))
    rows = []
    for (t, b), result in zip(cells, results[len(sizes):]):
        gain = responsiveness_gain(baselines[b], result)
        rows.append({
            "confidence_threshold": t,
            "batch_size": b,
            "mean_gain": gain.mean,
            "sessions_compared": gain.sessions_compared,
        })
    return pd.DataFrame(rows, columns=GAIN_COLUMNS)


# ----------------------------------------------------------------------
# Incremental vs standard benchmark
# ----------------------------------------------------------------------

@dataclass
class BenchmarkReport:
    """Per-invocation timings and work counts for both classifier modes."""
    invocations: pd.DataFrame
    batch_size: int

    def totals(self) -> Dict[str, float]:
        """Total wall-clock seconds per mode."""
        return self.invocations.groupby("mode")["seconds"].sum().to_dict()

    @property
    def speedup(self) -> float:
        totals = self.totals()
        incremental = totals.get(ClassifierMode.INCREMENTAL.value, 0.0)
        standard = totals.get(ClassifierMode.STANDARD.value, 0.0)
        return standard / incremental if incremental > 0 else float("inf")

    def per_batch_median(self) -> pd.DataFrame:
        """Median seconds per batch index, one column per mode."""
        return self.invocations.pivot_table(
            index="batch_index", columns="mode", values="seconds", aggfunc="median"
        )

    def per_batch_work(self) -> pd.DataFrame:
        """Comments extracted per batch index, one column per mode (deterministic)."""
        return self.invocations.pivot_table(
            index="batch_index", columns="mode", values="comments_extracted", aggfunc="max"
        )


def _fresh_copy(session: MediaSession) -> MediaSession:
    return MediaSession(
        session_id=session.session_id,
        poster=session.poster,
        caption=session.caption,
        created_at=session.created_at,
        comments=list(session.comments),
    )


def benchmark_classifier_modes(
    sessions: Sequence[MediaSession],
    classifier: LRModel,
    lexicon: SentimentLexicon,
    batch_size: int = 10
) -> BenchmarkReport:
    """
    Classify every session batch by batch in both modes and time each invocation.

    Incremental work per invocation depends on the batch only; standard work
    grows with the number of comments already seen.
    """
    rows = []
    stats = IncrementalStats()
    for mode in (ClassifierMode.INCREMENTAL, ClassifierMode.STANDARD):
        for original in sessions:
            session = _fresh_copy(original)
            prime_features(session, lexicon)
            batch_index = 0
            while session.unprocessed_count > 0:
                batch = session.comments[session.processed_count:session.processed_count + batch_size]
                started = time.perf_counter()
                if mode == ClassifierMode.INCREMENTAL:
                    features = fold_delta(session, extract_delta(batch, lexicon), len(batch))
                    predict_incremental(classifier, session, features, stats)
                    extracted, updates = len(batch), stats.last_updates
                else:
                    upto = session.processed_count + len(batch)
                    features = extract_batch(session, upto, lexicon)
                    session.cached_features = features
                    session.processed_count = upto
                    predict(classifier, features)
                    extracted, updates = upto, classifier.feature_count
                seconds = time.perf_counter() - started
                batch_index += 1
                rows.append({
                    "mode": mode.value,
                    "session_id": session.session_id,
                    "batch_index": batch_index,
                    "comments_extracted": extracted,
                    "product_updates": updates,
                    "seconds": seconds,
                })

    report = BenchmarkReport(
        invocations=pd.DataFrame(
            rows,
            columns=["mode", "session_id", "batch_index", "comments_extracted", "product_updates", "seconds"],
        ),
        batch_size=batch_size,
    )
    logger.info(f"[SIM] Benchmark over {len(sessions)} sessions: speedup {report.speedup:.1f}x")
    return report
