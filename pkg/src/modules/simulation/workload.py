"""
Synthetic workload generator.
Seeded media sessions with profile/caption signal, comment streams and
negative-comment bursts on bullying sessions.
"""

import dataclasses
from dataclasses import dataclass
from typing import List, Tuple, Union

import numpy as np
from loguru import logger

from src.core.exceptions import WorkloadConfigError
from src.modules.data.traces import CommentEvent, SessionEvent

NEGATIVE_VOCAB = (
    "idiot", "stupid", "dumb", "ugly", "loser", "hate", "fat", "pathetic",
    "worthless", "disgusting", "freak", "moron", "trash", "gross", "lame",
    "creep", "fake", "annoying", "weirdo", "clown", "die", "shut", "sucks",
    "jerk", "coward", "liar", "nasty", "failure", "useless", "stinks",
)
POSITIVE_VOCAB = (
    "love", "beautiful", "amazing", "nice", "great", "awesome", "cute", "cool",
    "funny", "wonderful", "best", "happy", "sweet", "pretty", "talented",
    "perfect", "good", "lol", "haha", "fun", "brilliant", "lovely", "fantastic",
    "adorable", "gorgeous", "glad", "proud", "excellent", "fabulous", "like",
)
NEUTRAL_VOCAB = (
    "the", "a", "you", "this", "is", "so", "what", "my", "your", "video",
    "look", "at", "and", "it", "me", "he", "she", "they", "today", "here",
    "just", "that", "with", "when", "why", "how", "dog", "song", "dance",
    "day", "school", "friends", "again", "now", "see", "watch", "go", "new",
    "time", "guy", "girl", "people", "omg", "bro", "yo", "really", "very",
    "bad", "weird", "crazy", "sad", "boring",
)
# Off the negative-word list but negative in the lexicon; comment noise only
MILD_NEGATIVE_VOCAB = ("bad", "weird", "crazy", "sad", "boring")
CAPTION_NEUTRAL_VOCAB = tuple(w for w in NEUTRAL_VOCAB if w not in MILD_NEGATIVE_VOCAB)

_NEG = np.array(NEGATIVE_VOCAB, dtype=object)
_POS = np.array(POSITIVE_VOCAB, dtype=object)
_NEU = np.array(NEUTRAL_VOCAB, dtype=object)
_CAPTION_NEU = np.array(CAPTION_NEUTRAL_VOCAB, dtype=object)

TraceEvents = List[Union[SessionEvent, CommentEvent]]


@dataclass(frozen=True)
class WorkloadConfig:
    """
    Workload parameters.

    Sessions are created uniformly over [0, creation_horizon), so a larger
    session_count means a heavier load on the same time span.
    """
    session_count: int = 1000
    bully_fraction: float = 0.05
    creation_horizon: int = 50_000
    rng_seed: int = 7

    # Comment stream
    min_comments: int = 10
    mean_extra_comments: float = 20.0
    bully_min_comments: int = 30
    comment_interval: float = 20.0
    mean_comment_tokens: float = 6.0

    # Token model
    positive_token_probability: float = 0.2
    negative_token_probability_benign: float = 0.01
    negative_token_probability_bully: float = 0.05

    # Bursts of negative comments on bullying sessions
    initial_burst_probability: float = 1.0
    burst_probability: float = 0.05
    burst_length: int = 8
    burst_negative_probability: float = 0.5
    burst_interval: float = 5.0

    # Predictor signal. Captions draw neutral words from CAPTION_NEUTRAL_VOCAB,
    # so a negative caption polarity comes from the negative vocabulary alone.
    mean_caption_tokens: float = 6.0
    caption_positive_probability: float = 0.1
    caption_negative_probability_benign: float = 0.005
    caption_negative_probability_bully: float = 0.7
    benign_follower_log_mean: float = 6.0
    bully_follower_log_mean: float = 5.0
    follower_log_sigma: float = 1.2

    def __post_init__(self):
        probabilities = (
            "bully_fraction",
            "positive_token_probability",
            "negative_token_probability_benign",
            "negative_token_probability_bully",
            "initial_burst_probability",
            "burst_probability",
            "burst_negative_probability",
            "caption_positive_probability",
            "caption_negative_probability_benign",
            "caption_negative_probability_bully",
        )
        for name in probabilities:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise WorkloadConfigError(name, value, "probability in [0, 1]")
        if self.positive_token_probability + max(
            self.negative_token_probability_bully,
            self.negative_token_probability_benign,
            self.burst_negative_probability,
        ) > 1.0:
            raise WorkloadConfigError(
                "positive_token_probability", self.positive_token_probability,
                "positive + negative token probability ≤ 1"
            )
        if self.caption_positive_probability + max(
            self.caption_negative_probability_bully,
            self.caption_negative_probability_benign,
        ) > 1.0:
            raise WorkloadConfigError(
                "caption_positive_probability", self.caption_positive_probability,
                "positive + negative caption token probability ≤ 1"
            )
        for name in ("session_count", "min_comments", "bully_min_comments", "rng_seed"):
            if getattr(self, name) < 0:
                raise WorkloadConfigError(name, getattr(self, name), "non-negative integer")
        for name in ("creation_horizon", "burst_length"):
            if getattr(self, name) < 1:
                raise WorkloadConfigError(name, getattr(self, name), "positive integer")
        for name in ("mean_extra_comments", "comment_interval", "mean_comment_tokens",
                     "mean_caption_tokens", "burst_interval"):
            if getattr(self, name) < 0:
                raise WorkloadConfigError(name, getattr(self, name), "non-negative number")
        if self.follower_log_sigma < 0:
            raise WorkloadConfigError("follower_log_sigma", self.follower_log_sigma, "non-negative number")

    def with_overrides(self, **changes) -> "WorkloadConfig":
        return dataclasses.replace(self, **changes)


def _texts(
    rng: np.random.Generator,
    negative_probabilities: np.ndarray,
    positive_probability: float,
    mean_tokens: float,
    neutral: np.ndarray = _NEU
) -> List[str]:
    """One text per entry of negative_probabilities."""
    count = len(negative_probabilities)
    lengths = 1 + rng.poisson(max(mean_tokens - 1.0, 0.0), size=count)
    total = int(lengths.sum())
    p_neg = np.repeat(negative_probabilities, lengths)
    u = rng.random(total)
    neg = _NEG[rng.integers(len(_NEG), size=total)]
    pos = _POS[rng.integers(len(_POS), size=total)]
    neu = neutral[rng.integers(len(neutral), size=total)]
    words = np.where(u < p_neg, neg, np.where(u < p_neg + positive_probability, pos, neu))
    ends = np.cumsum(lengths)
    starts = ends - lengths
    return [" ".join(words[s:e]) for s, e in zip(starts, ends)]


def _comment_plan(
    rng: np.random.Generator,
    config: WorkloadConfig,
    bully: bool,
    count: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Per-comment negative-token probability and inter-arrival mean."""
    p_neg = np.full(count, config.negative_token_probability_bully if bully
                    else config.negative_token_probability_benign)
    intervals = np.full(count, config.comment_interval)
    if not bully or count == 0:
        return p_neg, intervals

    in_burst = np.zeros(count, dtype=bool)
    starts = rng.random(count) < config.burst_probability
    starts[0] = rng.random() < config.initial_burst_probability
    for i in np.flatnonzero(starts):
        in_burst[i:i + config.burst_length] = True
    p_neg[in_burst] = config.burst_negative_probability
    intervals[in_burst] = config.burst_interval
    return p_neg, intervals


def generate_workload(config: WorkloadConfig) -> TraceEvents:
    """
    Generate a time-sorted trace. Identical configs give identical traces.

    Bullying sessions carry label true, an elevated negative-token rate and
    bursts of negative comments (one at the start with initial_burst_probability).
    """
    rng = np.random.default_rng(config.rng_seed)
    n = config.session_count
    created = np.sort(rng.integers(0, config.creation_horizon, size=n))
    labels = rng.random(n) < config.bully_fraction

    keyed = []
    width = max(len(str(n - 1)), 1)
    for order in range(n):
        bully = bool(labels[order])
        session_id = f"s{order:0{width}d}"
        created_at = int(created[order])

        follower_mean = config.bully_follower_log_mean if bully else config.benign_follower_log_mean
        caption_p = (config.caption_negative_probability_bully if bully
                     else config.caption_negative_probability_benign)
        caption = _texts(
            rng, np.array([caption_p]), config.caption_positive_probability,
            config.mean_caption_tokens, _CAPTION_NEU
        )[0]
        event = SessionEvent(
            id=session_id,
            created_at=created_at,
            followers=int(rng.lognormal(follower_mean, config.follower_log_sigma)),
            followings=int(rng.lognormal(5.0, 1.0)),
            posts=int(rng.lognormal(3.0, 1.0)),
            caption=caption,
            label=bully,
        )
        keyed.append(((created_at, 0, order, 0), event))

        count = config.min_comments + int(rng.poisson(config.mean_extra_comments))
        if bully:
            count = max(count, config.bully_min_comments)
        p_neg, means = _comment_plan(rng, config, bully, count)
        times = created_at + np.floor(np.cumsum(rng.exponential(1.0, size=count) * means)).astype(np.int64)
        texts = _texts(rng, p_neg, config.positive_token_probability, config.mean_comment_tokens)
        for position in range(count):
            at = int(times[position])
            keyed.append((
                (at, 1, order, position),
                CommentEvent(session_id=session_id, at=at, text=texts[position]),
            ))

    keyed.sort(key=lambda item: item[0])
    events = [event for _, event in keyed]
    logger.info(
        f"[SIM] Generated {n} sessions ({int(labels.sum())} bullying), "
        f"{len(events) - n} comments, seed {config.rng_seed}"
    )
    return events
