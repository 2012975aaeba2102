"""
Run metrics.
Alert precision/recall, responsiveness gain and tabular summaries.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np
import pandas as pd

from src.modules.data.reports import METRICS_COLUMNS
from src.modules.simulation.engine import RunResult


@dataclass
class AlertScore:
    """Session-level alert quality: a session counts once however many alerts it got."""
    precision: float
    recall: float
    true_positives: int
    false_positives: int
    false_negatives: int


@dataclass
class GainReport:
    """Per-session baseline/candidate time-to-alert ratios."""
    k: int
    ratios: Dict[str, float] = field(default_factory=dict)

    @property
    def sessions_compared(self) -> int:
        return len(self.ratios)

    @property
    def mean(self) -> Optional[float]:
        if not self.ratios:
            return None
        return float(np.mean(list(self.ratios.values())))


@dataclass
class RunMetrics:
    """One metrics CSV row."""
    policy: str
    classifier_mode: str
    confidence_threshold: float
    batch_size: int
    sessions: int
    alerts: int
    precision: float
    recall: float
    mean_gain: Optional[float]
    total_ticks: int

    def to_row(self) -> Dict:
        return {name: getattr(self, name) for name in METRICS_COLUMNS}


def score_alerts(result: RunResult, labels: Optional[Dict[str, bool]] = None) -> AlertScore:
    """
    Precision and recall of alerted sessions against ground truth.

    Empty denominators give 0.0.
    """
    labels = result.labels if labels is None else labels
    alerted = set(result.alert_times)
    tp = sum(1 for sid in alerted if labels.get(sid) is True)
    fp = sum(1 for sid in alerted if labels.get(sid) is False)
    fn = sum(1 for sid, label in labels.items() if label and sid not in alerted)
    return AlertScore(
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        true_positives=tp,
        false_positives=fp,
        false_negatives=fn,
    )


def responsiveness_gain(
    baseline: RunResult,
    candidate: RunResult,
    k: int = 1,
    session_ids: Optional[Iterable[str]] = None,
    positives_only: bool = True
) -> GainReport:
    """
    Ratio t_baseline / t_candidate of time to the k-th alert, per session.

    Only sessions alerted (k times) under both runs are compared. By default
    the comparison is restricted to sessions labeled true when labels exist.
    """
    if session_ids is None:
        labels = candidate.labels or baseline.labels
        if positives_only and labels:
            session_ids = [sid for sid, label in labels.items() if label]
        else:
            session_ids = list(candidate.alert_times)

    report = GainReport(k=k)
    for sid in session_ids:
        t_base = baseline.time_to_alert(sid, k)
        t_cand = candidate.time_to_alert(sid, k)
        if t_base is None or t_cand is None or t_cand <= 0:
            continue
        report.ratios[sid] = t_base / t_cand
    return report


def summarize_run(result: RunResult, mean_gain: Optional[float] = None) -> RunMetrics:
    """RunMetrics row for a run, with an optional gain against a baseline."""
    score = score_alerts(result)
    return RunMetrics(
        policy=result.policy.value,
        classifier_mode=result.classifier_mode.value,
        confidence_threshold=result.scheduler_config.confidence_threshold,
        batch_size=result.scheduler_config.batch_size,
        sessions=result.session_count,
        alerts=len(result.alerts),
        precision=score.precision,
        recall=score.recall,
        mean_gain=mean_gain,
        total_ticks=result.total_ticks,
    )


def metrics_frame(rows: Iterable[RunMetrics]) -> pd.DataFrame:
    """DataFrame with the metrics CSV columns, in order."""
    return pd.DataFrame([row.to_row() for row in rows], columns=METRICS_COLUMNS)


def invocation_frame(result: RunResult) -> pd.DataFrame:
    """Per-invocation records as a DataFrame."""
    columns = [
        "session_id", "time", "batch_size", "comments_extracted",
        "product_updates", "cost", "confidence", "decision", "wall_seconds",
    ]
    return pd.DataFrame([vars(record) for record in result.invocations], columns=columns)
