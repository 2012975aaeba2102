"""
Initial predictor.
One-shot HIGH/LOW priority for a new session from profile and caption features.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from loguru import logger

from src.core.exceptions import SchemaMismatchError, SingleClassDatasetError, UnattainablePrecisionError
from src.models import FeatureVector, MediaSession, Priority, SchemaId, UserProfile
from src.modules.classifier.logistic import LRModel, predict
from src.modules.features import extract_predictor_features
from src.modules.sentiment import SentimentLexicon


@dataclass(frozen=True)
class InitialPrediction:
    """Predicted priority and the cyberbullying-class confidence behind it."""
    priority: Priority
    confidence: float


def _require_predictor(model: LRModel) -> None:
    if model.schema_id != SchemaId.PREDICTOR_V1:
        raise SchemaMismatchError(SchemaId.PREDICTOR_V1.value, model.schema_id.value)


def predict_initial_priority(
    model: LRModel,
    profile: UserProfile,
    caption: str,
    lexicon: SentimentLexicon
) -> InitialPrediction:
    """
    HIGH iff confidence ≥ model.threshold (ties go HIGH).

    The interface takes no comments: the prediction runs once, at creation.
    """
    _require_predictor(model)
    result = predict(model, extract_predictor_features(profile, caption, lexicon))
    priority = Priority.HIGH if result.confidence >= model.threshold else Priority.LOW
    return InitialPrediction(priority=priority, confidence=result.confidence)


def predict_initial_batch(
    model: LRModel,
    sessions: Iterable[MediaSession],
    lexicon: SentimentLexicon
) -> List[InitialPrediction]:
    """Initial predictions for many sessions, in input order."""
    _require_predictor(model)
    return [
        predict_initial_priority(model, s.poster, s.caption, lexicon)
        for s in sessions
    ]


def precision_recall_curve(
    confidences: Sequence[float],
    labels: Sequence[bool]
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Precision and recall at every distinct confidence used as threshold.

    Returns:
        (thresholds ascending, precision, recall)
    """
    conf = np.asarray(confidences, dtype=np.float64)
    truth = np.asarray(labels, dtype=bool)
    order = np.argsort(conf, kind="stable")
    sorted_conf = conf[order]
    sorted_truth = truth[order].astype(np.int64)

    # suffix_tp[i] = positives among sorted_conf[i:]
    suffix_tp = np.cumsum(sorted_truth[::-1])[::-1]
    thresholds = np.unique(sorted_conf)
    first = np.searchsorted(sorted_conf, thresholds, side="left")
    predicted = len(conf) - first
    tp = suffix_tp[first]
    precision = tp / predicted
    recall = tp / max(int(truth.sum()), 1)
    return thresholds, precision, recall


def tune_predictor(
    model: LRModel,
    dataset: Sequence[Tuple[FeatureVector, bool]],
    min_precision: float = 0.0
) -> float:
    """
    Lowest decision threshold whose precision meets the floor.

    Recall only falls as the threshold rises, so the lowest feasible threshold
    is also the recall-maximizing one.

    Raises:
        SingleClassDatasetError: If the corpus lacks one of the labels
        UnattainablePrecisionError: If no threshold reaches min_precision
    """
    _require_predictor(model)
    labels = [bool(label) for _, label in dataset]
    positives = sum(labels)
    if positives == 0 or positives == len(labels):
        raise SingleClassDatasetError(positives > 0, len(labels))

    confidences = [predict(model, vector).confidence for vector, _ in dataset]
    thresholds, precision, recall = precision_recall_curve(confidences, labels)
    feasible = np.flatnonzero(precision >= min_precision)
    if feasible.size == 0:
        raise UnattainablePrecisionError(min_precision, float(precision.max()))

    k = int(feasible[0])
    threshold = float(thresholds[k])
    logger.info(
        f"[TRAIN] Predictor threshold {threshold:.4f}: "
        f"precision {precision[k]:.3f}, recall {recall[k]:.3f} (floor {min_precision})"
    )
    return threshold
