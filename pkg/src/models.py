"""
Data models for session-sentry.
Defines media sessions, comments, feature vectors, classifications and alerts.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, List, Tuple, Dict, Any
from enum import Enum


class Priority(Enum):
    """Scheduling priority. Two levels only."""
    HIGH = "high"
    LOW = "low"


class SchemaId(str, Enum):
    """Frozen feature orderings."""
    PREDICTOR_V1 = "PREDICTOR_V1"
    MAIN_V1 = "MAIN_V1"


SCHEMA_FEATURES: Dict[SchemaId, Tuple[str, ...]] = {
    SchemaId.PREDICTOR_V1: (
        "follower_count",
        "following_count",
        "post_count",
        "caption_polarity",
        "caption_subjectivity",
    ),
    SchemaId.MAIN_V1: (
        "follower_count",
        "following_count",
        "caption_polarity",
        "caption_subjectivity",
        "sum_comment_polarity",
        "sum_comment_subjectivity",
        "total_negative_words",
        "total_negative_comments",
    ),
}

# Position of the first comment-derived slot in MAIN_V1
MAIN_STATIC_SLOTS = 4


@dataclass(frozen=True)
class UserProfile:
    """Poster profile, frozen at session creation."""
    follower_count: int
    following_count: int
    post_count: int

    def __post_init__(self):
        for name in ("follower_count", "following_count", "post_count"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


@dataclass(frozen=True)
class Comment:
    """A single comment with its virtual arrival tick."""
    arrival_time: int
    text: str


@dataclass(frozen=True)
class FeatureVector:
    """Fixed-order feature values bound to a schema."""
    values: Tuple[float, ...]
    schema_id: SchemaId

    def __post_init__(self):
        expected = len(SCHEMA_FEATURES[self.schema_id])
        if len(self.values) != expected:
            raise ValueError(
                f"{self.schema_id.value} expects {expected} values, got {len(self.values)}"
            )
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError(f"{self.schema_id.value} vector contains NaN or infinity")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def as_dict(self) -> Dict[str, float]:
        """Feature name → value."""
        return dict(zip(SCHEMA_FEATURES[self.schema_id], self.values))


@dataclass
class ConfidenceHistory:
    """Cyberbullying-class confidences of successive classifications."""
    values: List[float] = field(default_factory=list)
    running_sum: float = 0.0

    def append(self, confidence: float) -> None:
        if not 0.0 <= confidence <= 1.0:
            raise ValueError(f"Confidence {confidence} outside [0, 1]")
        self.values.append(confidence)
        self.running_sum += confidence

    def mean(self) -> float:
        if not self.values:
            raise ValueError("Mean of empty confidence history")
        return self.running_sum / len(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Classification:
    """Decision and cyberbullying-class probability."""
    decision: bool
    confidence: float


@dataclass(frozen=True)
class DecisionRecord:
    """One entry of a session's decision history."""
    time: int
    decision: bool
    confidence: float


@dataclass
class MediaSession:
    """
    A posted media item plus its time-ordered comment stream and classification state.

    The ground truth label is only read by the simulator and the metrics code;
    classification entry points receive profile, caption and comments.
    """
    session_id: str
    poster: UserProfile
    caption: str
    created_at: int
    comments: List[Comment] = field(default_factory=list)
    processed_count: int = 0
    cached_features: Optional[FeatureVector] = None
    cached_products: List[float] = field(default_factory=list)
    cached_standardized: List[float] = field(default_factory=list)
    cached_score: float = 0.0
    confidence_history: ConfidenceHistory = field(default_factory=ConfidenceHistory)
    decision_history: List[DecisionRecord] = field(default_factory=list)
    priority: Priority = Priority.LOW
    last_alert_index: Optional[int] = None
    ground_truth_label: Optional[bool] = None

    @property
    def unprocessed_count(self) -> int:
        return len(self.comments) - self.processed_count

    @property
    def last_arrival_time(self) -> Optional[int]:
        return self.comments[-1].arrival_time if self.comments else None

    def is_fresh(self) -> bool:
        """True when no comment has been folded and nothing was classified."""
        return (
            self.processed_count == 0
            and not self.confidence_history.values
            and not self.decision_history
            and self.last_alert_index is None
        )

    def record_decision(self, now: int, result: Classification) -> int:
        """
        Append a classification to both histories.

        Returns:
            Index of the new decision
        """
        self.confidence_history.append(result.confidence)
        self.decision_history.append(
            DecisionRecord(time=now, decision=result.decision, confidence=result.confidence)
        )
        return len(self.decision_history) - 1


@dataclass(frozen=True)
class AlertRecord:
    """Alert raised for a session."""
    session_id: str
    raised_at: int
    decision_indices: Tuple[int, ...]
    confidence_at_alert: float

    @property
    def positives_since_last(self) -> int:
        return len(self.decision_indices)

    def to_dict(self) -> Dict[str, Any]:
        """Alert sink record."""
        return {
            "session_id": self.session_id,
            "raised_at": self.raised_at,
            "positives_since_last": self.positives_since_last,
            "confidence": self.confidence_at_alert,
        }
