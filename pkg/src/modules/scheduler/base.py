"""
Base scheduler class and shared scheduling rules.
"""

from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Set

from loguru import logger

from src.core.exceptions import DoubleAdmissionError, EmptyHistoryError, SchedulerError, StillEnqueuedError
from src.core.settings import ChunkMode, SchedulingPolicy
from src.models import Comment, MediaSession, Priority


@dataclass
class SchedulerConfig:
    """Reprioritization and batching knobs."""
    confidence_threshold: float = 0.2
    batch_size: int = 10
    chunk_mode: ChunkMode = ChunkMode.CAPPED

    def __post_init__(self):
        if not 0.0 <= self.confidence_threshold <= 1.0:
            raise ValueError(f"confidence_threshold {self.confidence_threshold} outside [0, 1]")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be positive, got {self.batch_size}")
        self.chunk_mode = ChunkMode(self.chunk_mode)

    @classmethod
    def from_settings(cls, settings) -> "SchedulerConfig":
        return cls(**settings.get_scheduler_config())


@dataclass
class SchedulerState:
    """The three FIFO queues of session ids plus rotation bookkeeping."""
    policy: SchedulingPolicy
    config: SchedulerConfig = field(default_factory=SchedulerConfig)
    q1: Deque[str] = field(default_factory=deque)
    q2: Deque[str] = field(default_factory=deque)
    q3: Deque[str] = field(default_factory=deque)
    rotations: int = 0


def setting_priority(session: MediaSession, confidence_threshold: float = 0.2) -> Priority:
    """
    HIGH iff the mean of the whole confidence history is ≥ confidence_threshold.

    Updates session.priority when it changes.

    Raises:
        EmptyHistoryError: If the session was never classified
    """
    history = session.confidence_history
    if len(history) == 0:
        raise EmptyHistoryError(session.session_id)
    priority = Priority.HIGH if history.mean() >= confidence_threshold else Priority.LOW
    if priority != session.priority:
        logger.debug(
            f"[SCHEDULER] {session.session_id} {session.priority.value} -> {priority.value} "
            f"(mean confidence {history.mean():.4f})"
        )
        session.priority = priority
    return priority


def take_batch(
    session: MediaSession,
    batch_size: int = 10,
    chunk_mode: ChunkMode = ChunkMode.CAPPED
) -> List[Comment]:
    """Oldest unprocessed comments: up to batch_size (capped) or all of them."""
    start = session.processed_count
    if chunk_mode == ChunkMode.ALL_AVAILABLE:
        return session.comments[start:]
    return session.comments[start:start + batch_size]


class BaseScheduler(ABC):
    """
    Base class for scheduling policies.

    Owned by the engine loop. A session id is either enqueued or out for
    processing; requeue returns it after its classification.
    """

    policy: SchedulingPolicy

    def __init__(self, config: Optional[SchedulerConfig] = None):
        self.config = config or SchedulerConfig()
        self._admitted: Set[str] = set()
        self._enqueued: Set[str] = set()

    @abstractmethod
    def admit(self, session_id: str, initial_priority: Priority) -> None:
        """Add a new session."""
        pass

    @abstractmethod
    def next(self) -> Optional[str]:
        """Pop the next session to serve, or None when nothing is enqueued."""
        pass

    @abstractmethod
    def requeue(self, session_id: str, new_priority: Priority) -> None:
        """Return a just-served session."""
        pass

    def is_tracked(self, session_id: str) -> bool:
        """Whether this policy will ever serve the session."""
        return session_id in self._admitted

    def contains(self, session_id: str) -> bool:
        return session_id in self._enqueued

    def __contains__(self, session_id: object) -> bool:
        return session_id in self._enqueued

    def __len__(self) -> int:
        return len(self._enqueued)

    @property
    def admitted_count(self) -> int:
        return len(self._admitted)

    def setting_priority(self, session: MediaSession) -> Priority:
        return setting_priority(session, self.config.confidence_threshold)

    def take_batch(self, session: MediaSession) -> List[Comment]:
        return take_batch(session, self.config.batch_size, self.config.chunk_mode)

    def _register(self, session_id: str) -> None:
        if session_id in self._admitted:
            raise DoubleAdmissionError(session_id)
        self._admitted.add(session_id)
        self._enqueued.add(session_id)

    def _check_requeue(self, session_id: str) -> None:
        if session_id not in self._admitted:
            raise SchedulerError(
                f"Session {session_id} was never admitted",
                details={"session_id": session_id}
            )
        if session_id in self._enqueued:
            raise StillEnqueuedError(session_id)
        self._enqueued.add(session_id)

    def _served(self, session_id: str) -> str:
        self._enqueued.discard(session_id)
        return session_id

    @abstractmethod
    def snapshot(self) -> Dict[str, List[str]]:
        """Queue contents, head first."""
        pass
