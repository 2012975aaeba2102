"""
Logistic regression classifier.
Full-batch gradient-descent training, standard inference, and incremental
inference that reuses cached per-feature weight products.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ValidationError, model_validator

from src.core.exceptions import (
    EmptyDatasetError,
    InvalidFeatureError,
    ModelFileError,
    SchemaMismatchError,
    SingleClassDatasetError,
)
from src.models import SCHEMA_FEATURES, Classification, FeatureVector, MediaSession, SchemaId

CONFIDENCE_FLOOR = 1e-15
CONFIDENCE_CEIL = 1.0 - 1e-15


@dataclass(frozen=True)
class LRModel:
    """
    Trained weights, bias and z-score parameters for one schema.

    Degenerate (constant) training features carry stddev 1 and weight 0.
    """
    schema_id: SchemaId
    weights: Tuple[float, ...]
    bias: float
    means: Tuple[float, ...]
    stddevs: Tuple[float, ...]
    threshold: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "schema_id", SchemaId(self.schema_id))
        expected = len(SCHEMA_FEATURES[self.schema_id])
        for name in ("weights", "means", "stddevs"):
            values = tuple(float(v) for v in getattr(self, name))
            if len(values) != expected:
                raise ValueError(f"{name} has {len(values)} entries, {self.schema_id.value} needs {expected}")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} contains NaN or infinity")
            object.__setattr__(self, name, values)
        if any(s <= 0 for s in self.stddevs):
            raise ValueError("Every stddev must be positive")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"Decision threshold {self.threshold} outside (0, 1)")
        if not math.isfinite(self.bias):
            raise ValueError("Bias must be finite")

    @property
    def feature_count(self) -> int:
        return len(self.weights)

    def with_threshold(self, threshold: float) -> "LRModel":
        """Copy of this model with another decision threshold."""
        return LRModel(
            schema_id=self.schema_id,
            weights=self.weights,
            bias=self.bias,
            means=self.means,
            stddevs=self.stddevs,
            threshold=threshold,
        )

    def to_dict(self) -> Dict[str, Any]:
        """Model file record (exact field names)."""
        return {
            "schema_id": self.schema_id.value,
            "weights": list(self.weights),
            "bias": self.bias,
            "means": list(self.means),
            "stddevs": list(self.stddevs),
            "threshold": self.threshold,
        }


@dataclass
class TrainingConfig:
    """Gradient descent parameters."""
    learning_rate: float = 0.5
    epochs: int = 1500
    l2: float = 1e-3
    seed: int = 7

    @classmethod
    def from_settings(cls, settings) -> "TrainingConfig":
        return cls(**settings.get_training_config())


@dataclass
class IncrementalStats:
    """Product-update accounting for predict_incremental."""
    invocations: int = 0
    product_updates: int = 0
    last_updates: int = 0

    def record(self, updates: int) -> None:
        self.invocations += 1
        self.product_updates += updates
        self.last_updates = updates


@dataclass
class EvaluationReport:
    """Binary classification quality on a labeled dataset."""
    precision: float
    recall: float
    accuracy: float
    count: int
    positives: int = 0
    predicted_positives: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "accuracy": self.accuracy,
            "count": self.count,
            "positives": self.positives,
            "predicted_positives": self.predicted_positives,
        }


def sigmoid(z: float) -> float:
    """Numerically stable logistic function clipped to the open unit interval."""
    if z >= 0:
        value = 1.0 / (1.0 + math.exp(-z))
    else:
        e = math.exp(z)
        value = e / (1.0 + e)
    return min(max(value, CONFIDENCE_FLOOR), CONFIDENCE_CEIL)


def _sigmoid_array(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    e = np.exp(z[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _check_schema(model: LRModel, features: FeatureVector) -> None:
    if features.schema_id != model.schema_id:
        raise SchemaMismatchError(model.schema_id.value, SchemaId(features.schema_id).value)
    if not all(math.isfinite(v) for v in features.values):
        raise InvalidFeatureError("Feature vector contains NaN or infinity", features.schema_id.value)


def _standardize(model: LRModel, values: Sequence[float]) -> List[float]:
    return [(x - m) / s for x, m, s in zip(values, model.means, model.stddevs)]


def _score(bias: float, products: Sequence[float]) -> float:
    # Fixed summation order shared by both inference paths
    score = bias
    for product in products:
        score += product
    return score


def _classify(model: LRModel, score: float) -> Classification:
    confidence = sigmoid(score)
    return Classification(decision=confidence >= model.threshold, confidence=confidence)


def predict(model: LRModel, features: FeatureVector) -> Classification:
    """
    Standard inference: standardize, full dot product, sigmoid.

    Raises:
        SchemaMismatchError: If the vector belongs to another schema
        InvalidFeatureError: On NaN features
    """
    _check_schema(model, features)
    standardized = _standardize(model, features.values)
    products = [w * x for w, x in zip(model.weights, standardized)]
    return _classify(model, _score(model.bias, products))


def predict_incremental(
    model: LRModel,
    session: MediaSession,
    new_features: FeatureVector,
    stats: Optional[IncrementalStats] = None
) -> Classification:
    """
    Incremental inference against the session's product cache.

    Only features whose standardized value changed (bitwise) get a new
    weight product; the score is re-summed from the cached products. The first
    call on a session is a full computation that populates the cache.

    Args:
        model: Main classifier
        session: Session whose cache is read and updated
        new_features: Vector produced by fold_delta
        stats: Optional accumulator for product-update counts

    Returns:
        Classification identical to predict(model, new_features)
    """
    _check_schema(model, new_features)
    standardized = _standardize(model, new_features.values)
    cached_x = session.cached_standardized
    products = session.cached_products

    if len(products) != model.feature_count or len(cached_x) != model.feature_count:
        products = [w * x for w, x in zip(model.weights, standardized)]
        updates = len(products)
    else:
        products = list(products)
        updates = 0
        weights = model.weights
        for i, x in enumerate(standardized):
            if x != cached_x[i]:
                products[i] = weights[i] * x
                updates += 1

    if updates:
        session.cached_score = _score(model.bias, products)
    session.cached_products = products
    session.cached_standardized = standardized

    if stats is not None:
        stats.record(updates)
    return _classify(model, session.cached_score)


def reset_incremental_cache(session: MediaSession) -> None:
    """Drop cached products so the next incremental call recomputes everything."""
    session.cached_products = []
    session.cached_standardized = []
    session.cached_score = 0.0


def _dataset_arrays(dataset: Sequence[Tuple[FeatureVector, bool]]) -> Tuple[SchemaId, np.ndarray, np.ndarray]:
    if len(dataset) < 2:
        raise EmptyDatasetError(len(dataset))
    schema_id = SchemaId(dataset[0][0].schema_id)
    for vector, _ in dataset:
        if vector.schema_id != schema_id:
            raise SchemaMismatchError(schema_id.value, SchemaId(vector.schema_id).value)
    X = np.array([vector.values for vector, _ in dataset], dtype=np.float64)
    y = np.array([1.0 if label else 0.0 for _, label in dataset], dtype=np.float64)
    positives = int(y.sum())
    if positives == 0:
        raise SingleClassDatasetError(False, len(dataset))
    if positives == len(dataset):
        raise SingleClassDatasetError(True, len(dataset))
    return schema_id, X, y


def log_loss_and_gradient(
    weights: np.ndarray,
    bias: float,
    X: np.ndarray,
    y: np.ndarray,
    l2: float
) -> Tuple[float, np.ndarray, float]:
    """
    Mean log loss plus (l2/2)·||w||² and its gradient.

    Args:
        weights: Weight vector (d,)
        bias: Intercept
        X: Standardized design matrix (m, d)
        y: Labels in {0, 1} (m,)
        l2: Penalty strength on the weights only

    Returns:
        (loss, grad_weights, grad_bias)
    """
    weights = np.asarray(weights, dtype=np.float64)
    z = X @ weights + bias
    m = X.shape[0]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * l2 * float(weights @ weights))
    residual = _sigmoid_array(z) - y
    grad_w = X.T @ residual / m + l2 * weights
    grad_b = float(np.mean(residual))
    return loss, grad_w, grad_b


def train(
    dataset: Sequence[Tuple[FeatureVector, bool]],
    config: Optional[TrainingConfig] = None,
    threshold: float = 0.5
) -> LRModel:
    """
    Fit standardization and weights by full-batch gradient descent.

    Deterministic given config.seed.

    Raises:
        EmptyDatasetError: Fewer than two examples
        SingleClassDatasetError: Only one label present
        SchemaMismatchError: Mixed schemas in the dataset
    """
    config = config or TrainingConfig()
    schema_id, X, y = _dataset_arrays(dataset)

    means = X.mean(axis=0)
    stddevs = X.std(axis=0)
    degenerate = stddevs <= 1e-12 * np.maximum(1.0, np.abs(means))
    stddevs = np.where(degenerate, 1.0, stddevs)
    mask = np.where(degenerate, 0.0, 1.0)
    X_hat = (X - means) / stddevs
    X_hat[:, degenerate] = 0.0

    rng = np.random.default_rng(config.seed)
    weights = rng.normal(0.0, 0.01, X.shape[1]) * mask
    bias = 0.0

    loss = float("nan")
    for _ in range(config.epochs):
        loss, grad_w, grad_b = log_loss_and_gradient(weights, bias, X_hat, y, config.l2)
        weights = weights - config.learning_rate * grad_w * mask
        bias = bias - config.learning_rate * grad_b

    logger.info(
        f"[TRAIN] {schema_id.value}: {len(y)} examples, {int(y.sum())} positive, "
        f"final loss {loss:.5f}, degenerate features {int(degenerate.sum())}"
    )
    return LRModel(
        schema_id=schema_id,
        weights=tuple(float(w) for w in weights),
        bias=float(bias),
        means=tuple(float(m) for m in means),
        stddevs=tuple(float(s) for s in stddevs),
        threshold=threshold,
    )


def evaluate(model: LRModel, dataset: Sequence[Tuple[FeatureVector, bool]]) -> EvaluationReport:
    """Precision, recall and accuracy of model decisions. Empty denominators give 0.0."""
    tp = fp = fn = correct = 0
    for vector, label in dataset:
        decision = predict(model, vector).decision
        if decision and label:
            tp += 1
        elif decision:
            fp += 1
        elif label:
            fn += 1
        if decision == bool(label):
            correct += 1
    count = len(dataset)
    return EvaluationReport(
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        accuracy=correct / count if count else 0.0,
        count=count,
        positives=tp + fn,
        predicted_positives=tp + fp,
    )


class ModelFile(BaseModel):
    """On-disk model record."""
    schema_id: SchemaId
    weights: List[float]
    bias: float
    means: List[float]
    stddevs: List[float]
    threshold: float

    @model_validator(mode="after")
    def validate_lengths(self):
        expected = len(SCHEMA_FEATURES[self.schema_id])
        for name in ("weights", "means", "stddevs"):
            if len(getattr(self, name)) != expected:
                raise ValueError(f"{name} must have {expected} entries for {self.schema_id.value}")
        return self


def save_model(model: LRModel, path: Path) -> Path:
    """Write the model as JSON. Floats are written with repr precision, so reloads are lossless."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(model.to_dict(), indent=2) + "\n")
    logger.info(f"[MODEL] Saved {model.schema_id.value} model to {path}")
    return path


def load_model(path: Path) -> LRModel:
    """
    Read and validate a model file.

    Raises:
        ModelFileError: If the file is missing, not JSON, or fails validation
    """
    path = Path(path)
    if not path.exists():
        raise ModelFileError(str(path), "file not found")
    try:
        record = ModelFile.model_validate_json(path.read_text(encoding="utf-8"))
        return LRModel(
            schema_id=record.schema_id,
            weights=tuple(record.weights),
            bias=record.bias,
            means=tuple(record.means),
            stddevs=tuple(record.stddevs),
            threshold=record.threshold,
        )
    except ValidationError as e:
        raise ModelFileError(str(path), e.errors()[0]["msg"]) from None
    except ValueError as e:
        raise ModelFileError(str(path), str(e)) from None
