"""
Feature Extraction
Batch and incremental computation of predictor and main-classifier feature vectors.

Comment-derived MAIN_V1 slots are additive: the features of n + δn comments are
the features of n comments plus a delta computed over the δn new ones only.
Each comment's polarity/subjectivity is quantised to a multiple of
SENTIMENT_QUANTUM so every partial sum is exact in double precision, which
makes iterated folding bit-identical to batch extraction for any partition.
"""

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from loguru import logger

from src.core.exceptions import DeltaMismatchError, FeatureError, FeatureRangeError
from src.models import (
    MAIN_STATIC_SLOTS,
    SCHEMA_FEATURES,
    Comment,
    FeatureVector,
    MediaSession,
    SchemaId,
    UserProfile,
)
from src.modules.sentiment import SentimentLexicon, polarity, score_comment, subjectivity

QUANTUM_BITS = 36
SENTIMENT_QUANTUM = 2.0 ** -QUANTUM_BITS


def quantize(value: float) -> float:
    """Round to the nearest multiple of SENTIMENT_QUANTUM."""
    return math.ldexp(round(math.ldexp(value, QUANTUM_BITS)), -QUANTUM_BITS)


class FeatureSchema:
    """Frozen feature orderings. A changed ordering needs a new schema id."""
    PREDICTOR_V1: Tuple[str, ...] = SCHEMA_FEATURES[SchemaId.PREDICTOR_V1]
    MAIN_V1: Tuple[str, ...] = SCHEMA_FEATURES[SchemaId.MAIN_V1]

    @staticmethod
    def names(schema_id: SchemaId) -> Tuple[str, ...]:
        return SCHEMA_FEATURES[SchemaId(schema_id)]

    @staticmethod
    def size(schema_id: SchemaId) -> int:
        return len(SCHEMA_FEATURES[SchemaId(schema_id)])

    @staticmethod
    def index(schema_id: SchemaId, name: str) -> int:
        return SCHEMA_FEATURES[SchemaId(schema_id)].index(name)


@dataclass(frozen=True)
class AdditiveDelta:
    """
    The four comment-derived MAIN_V1 features over a batch of comment_count comments.
    """
    sum_polarity: float = 0.0
    sum_subjectivity: float = 0.0
    negative_words: int = 0
    negative_comments: int = 0
    comment_count: int = 0

    def __post_init__(self):
        if self.negative_comments > self.comment_count:
            raise ValueError(
                f"{self.negative_comments} negative comments in a batch of {self.comment_count}"
            )
        if self.negative_words < self.negative_comments:
            raise ValueError(
                f"{self.negative_words} negative words for {self.negative_comments} negative comments"
            )

    def __add__(self, other: "AdditiveDelta") -> "AdditiveDelta":
        if not isinstance(other, AdditiveDelta):
            return NotImplemented
        return AdditiveDelta(
            sum_polarity=self.sum_polarity + other.sum_polarity,
            sum_subjectivity=self.sum_subjectivity + other.sum_subjectivity,
            negative_words=self.negative_words + other.negative_words,
            negative_comments=self.negative_comments + other.negative_comments,
            comment_count=self.comment_count + other.comment_count,
        )

    def values(self) -> Tuple[float, float, float, float]:
        """Delta in MAIN_V1 slot order."""
        return (
            self.sum_polarity,
            self.sum_subjectivity,
            float(self.negative_words),
            float(self.negative_comments),
        )

    def is_zero(self) -> bool:
        return self.values() == (0.0, 0.0, 0.0, 0.0)


ZERO_DELTA = AdditiveDelta()


def comment_contribution(comment: Comment, lexicon: SentimentLexicon) -> AdditiveDelta:
    """Additive features of a single comment."""
    pol, subj, negatives = score_comment(comment.text, lexicon)
    return AdditiveDelta(
        sum_polarity=quantize(pol),
        sum_subjectivity=quantize(subj),
        negative_words=negatives,
        negative_comments=1 if negatives > 0 else 0,
        comment_count=1,
    )


def extract_predictor_features(
    profile: UserProfile,
    caption: str,
    lexicon: SentimentLexicon
) -> FeatureVector:
    """PREDICTOR_V1 vector: profile counts plus caption sentiment. Never sees comments."""
    return FeatureVector(
        values=(
            float(profile.follower_count),
            float(profile.following_count),
            float(profile.post_count),
            polarity(caption, lexicon),
            subjectivity(caption, lexicon),
        ),
        schema_id=SchemaId.PREDICTOR_V1,
    )


def _static_main_values(session: MediaSession, lexicon: SentimentLexicon) -> Tuple[float, ...]:
    return (
        float(session.poster.follower_count),
        float(session.poster.following_count),
        polarity(session.caption, lexicon),
        subjectivity(session.caption, lexicon),
    )


def _accumulate(comments: Sequence[Comment], lexicon: SentimentLexicon) -> List[float]:
    # [sum_pol, sum_subj, neg_words, neg_comments] summed comment by comment
    totals = [0.0, 0.0, 0.0, 0.0]
    for comment in comments:
        pol, subj, negatives = score_comment(comment.text, lexicon)
        totals[0] += quantize(pol)
        totals[1] += quantize(subj)
        totals[2] += negatives
        if negatives:
            totals[3] += 1.0
    return totals


def extract_batch(session: MediaSession, upto: int, lexicon: SentimentLexicon) -> FeatureVector:
    """
    Full MAIN_V1 extraction over the first `upto` comments.

    Raises:
        FeatureRangeError: If upto is outside [0, len(comments)]
    """
    if not 0 <= upto <= len(session.comments):
        raise FeatureRangeError(upto, len(session.comments))
    static = _static_main_values(session, lexicon)
    additive = _accumulate(session.comments[:upto], lexicon)
    return FeatureVector(values=static + tuple(additive), schema_id=SchemaId.MAIN_V1)


def extract_delta(comments: Sequence[Comment], lexicon: SentimentLexicon) -> AdditiveDelta:
    """Additive features over exactly the given comments; cost depends on len(comments) only."""
    totals = _accumulate(comments, lexicon)
    return AdditiveDelta(
        sum_polarity=totals[0],
        sum_subjectivity=totals[1],
        negative_words=int(totals[2]),
        negative_comments=int(totals[3]),
        comment_count=len(comments),
    )


def prime_features(session: MediaSession, lexicon: SentimentLexicon) -> FeatureVector:
    """Seed cached_features with the zero-comment vector if nothing is cached yet."""
    if session.cached_features is None:
        if session.processed_count != 0:
            raise FeatureError(
                f"Session {session.session_id} has processed comments but no cached features",
                details={"session_id": session.session_id, "processed_count": session.processed_count}
            )
        session.cached_features = extract_batch(session, 0, lexicon)
    return session.cached_features


def fold_delta(session: MediaSession, delta: AdditiveDelta, batch_size: int) -> FeatureVector:
    """
    Add a delta over comments [n, n + batch_size) to the cached vector.

    Static slots are carried over untouched. Replaces cached_features and
    advances processed_count.

    Raises:
        FeatureError: If the session has no cached features
        DeltaMismatchError: If the delta does not cover exactly batch_size
            comments or the batch runs past the comment stream
    """
    cached = session.cached_features
    if cached is None:
        raise FeatureError(
            f"Session {session.session_id} has no cached features to fold into",
            details={"session_id": session.session_id}
        )
    if delta.comment_count != batch_size:
        raise DeltaMismatchError(
            f"Delta covers {delta.comment_count} comments, batch is {batch_size}",
            session_id=session.session_id,
            delta_comments=delta.comment_count,
            batch_size=batch_size,
        )
    if session.processed_count + batch_size > len(session.comments):
        raise DeltaMismatchError(
            "Batch extends past the comment stream",
            session_id=session.session_id,
            processed_count=session.processed_count,
            batch_size=batch_size,
            available=len(session.comments),
        )

    old = cached.values
    added = delta.values()
    updated = old[:MAIN_STATIC_SLOTS] + tuple(
        old[MAIN_STATIC_SLOTS + i] + added[i] for i in range(len(added))
    )
    vector = FeatureVector(values=updated, schema_id=SchemaId.MAIN_V1)
    session.cached_features = vector
    session.processed_count += batch_size
    logger.debug(
        f"[FEATURES] Folded {batch_size} comments into {session.session_id} "
        f"(n={session.processed_count})"
    )
    return vector


def extract_prefix_examples(
    session: MediaSession,
    lexicon: SentimentLexicon,
    step: int
) -> List[FeatureVector]:
    """
    MAIN_V1 vectors after every `step` comments plus the complete session.

    Used to train the main classifier on partial sessions, the way the engine
    sees them.
    """
    if step < 1:
        raise ValueError(f"step must be positive, got {step}")
    static = _static_main_values(session, lexicon)
    totals = ZERO_DELTA
    vectors: List[FeatureVector] = []
    total = len(session.comments)
    for position, comment in enumerate(session.comments, start=1):
        totals = totals + comment_contribution(comment, lexicon)
        if position % step == 0 or position == total:
            vectors.append(
                FeatureVector(values=static + totals.values(), schema_id=SchemaId.MAIN_V1)
            )
    if not vectors:
        vectors.append(FeatureVector(values=static + ZERO_DELTA.values(), schema_id=SchemaId.MAIN_V1))
    return vectors
