"""
Detection engine.
Deterministic discrete-time loop: predict → schedule → extract → classify →
reprioritize → alert, driven by a virtual clock and a trace of events.
"""

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, Iterable, List, Optional, Sequence, Set, Union

from loguru import logger

from src.core.exceptions import InvariantViolationError, MissingModelError, SchemaMismatchError, SimulationError
from src.core.settings import ClassifierMode, SchedulingPolicy, Settings
from src.models import AlertRecord, Classification, MediaSession, SchemaId
from src.modules.alerts import AlertManager, AlertSink
from src.modules.classifier import (
    IncrementalStats,
    LRModel,
    predict,
    predict_incremental,
    predict_initial_priority,
)
from src.modules.data.traces import CommentEvent, SessionEvent, comment_from_event, session_from_event
from src.modules.features import extract_batch, extract_delta, fold_delta, prime_features
from src.modules.scheduler import BaseScheduler, SchedulerConfig, create_scheduler
from src.modules.sentiment import SentimentLexicon
from src.modules.simulation.cost_model import CostModel, VirtualClock
from src.modules.store import SessionStore

Event = Union[SessionEvent, CommentEvent]


@dataclass(frozen=True)
class InvocationRecord:
    """One classification invocation."""
    session_id: str
    time: int
    batch_size: int
    comments_extracted: int
    product_updates: int
    cost: int
    confidence: float
    decision: bool
    wall_seconds: Optional[float] = None


@dataclass
class RunResult:
    """Everything a run produced, keyed for metric computation."""
    policy: SchedulingPolicy
    classifier_mode: ClassifierMode
    scheduler_config: SchedulerConfig
    alert_threshold: int
    alerts: List[AlertRecord] = field(default_factory=list)
    alert_times: Dict[str, List[int]] = field(default_factory=dict)
    created_at: Dict[str, int] = field(default_factory=dict)
    labels: Dict[str, bool] = field(default_factory=dict)
    invocations: List[InvocationRecord] = field(default_factory=list)
    predictor_ticks: int = 0
    total_ticks: int = 0
    end_time: int = 0
    visits: int = 0

    @property
    def session_count(self) -> int:
        return len(self.created_at)

    @property
    def classification_ticks(self) -> int:
        return sum(record.cost for record in self.invocations)

    def time_to_alert(self, session_id: str, k: int = 1) -> Optional[int]:
        """Ticks from creation to the session's k-th alert, or None."""
        times = self.alert_times.get(session_id, [])
        if k < 1 or len(times) < k:
            return None
        return times[k - 1] - self.created_at[session_id]


class DetectionEngine:
    """
    Streaming detection engine.

    Single-threaded: every store, scheduler and alert mutation happens on the
    loop in `run`/`step`. Producers hand events over through `submit`, which
    the loop drains before each scheduling decision.
    """

    def __init__(
        self,
        predictor: Optional[LRModel],
        classifier: Optional[LRModel],
        lexicon: SentimentLexicon,
        policy: SchedulingPolicy = SchedulingPolicy.DYNAMIC,
        classifier_mode: ClassifierMode = ClassifierMode.INCREMENTAL,
        scheduler_config: Optional[SchedulerConfig] = None,
        cost_model: Optional[CostModel] = None,
        alert_threshold: int = 2,
        alert_sink: Optional[AlertSink] = None,
        verify_invariants: bool = False,
        measure_wall_time: bool = False
    ):
        if predictor is None:
            raise MissingModelError("predictor")
        if classifier is None:
            raise MissingModelError("classifier")
        if predictor.schema_id != SchemaId.PREDICTOR_V1:
            raise SchemaMismatchError(SchemaId.PREDICTOR_V1.value, predictor.schema_id.value)
        if classifier.schema_id != SchemaId.MAIN_V1:
            raise SchemaMismatchError(SchemaId.MAIN_V1.value, classifier.schema_id.value)

        self.predictor = predictor
        self.classifier = classifier
        self.lexicon = lexicon
        self.policy = SchedulingPolicy(policy)
        self.classifier_mode = ClassifierMode(classifier_mode)
        self.scheduler_config = scheduler_config or SchedulerConfig()
        self.cost_model = cost_model or CostModel()
        self.verify_invariants = verify_invariants
        self.measure_wall_time = measure_wall_time

        self.store = SessionStore()
        self.scheduler: BaseScheduler = create_scheduler(self.policy, self.scheduler_config)
        self.alert_manager = AlertManager(threshold=alert_threshold, sink=alert_sink)
        self.clock = VirtualClock()
        self.stats = IncrementalStats()

        self._inbox: Deque[Event] = deque()
        self._pending: Set[str] = set()
        self._invocations: List[InvocationRecord] = []
        self._predictor_ticks = 0
        self._visits = 0

    @classmethod
    def from_settings(
        cls,
        predictor: Optional[LRModel],
        classifier: Optional[LRModel],
        lexicon: SentimentLexicon,
        settings: Settings,
        alert_sink: Optional[AlertSink] = None,
        measure_wall_time: bool = False
    ) -> "DetectionEngine":
        return cls(
            predictor,
            classifier,
            lexicon,
            policy=settings.policy,
            classifier_mode=settings.classifier_mode,
            scheduler_config=SchedulerConfig.from_settings(settings),
            cost_model=CostModel.from_settings(settings),
            alert_threshold=settings.alert_threshold,
            alert_sink=alert_sink,
            verify_invariants=settings.verify_invariants,
            measure_wall_time=measure_wall_time,
        )

    # ------------------------------------------------------------------
    # Ingestion
    # ------------------------------------------------------------------

    def submit(self, event: Event) -> None:
        """Hand an event to the loop (single producer)."""
        self._inbox.append(event)

    def _drain_inbox(self) -> None:
        while self._inbox:
            event = self._inbox.popleft()
            if isinstance(event, SessionEvent):
                self._admit(event)
            else:
                self._ingest_comment(event)

    def _admit(self, event: SessionEvent) -> None:
        session = session_from_event(event)
        self.store.insert(session)
        prime_features(session, self.lexicon)

        prediction = predict_initial_priority(
            self.predictor, session.poster, session.caption, self.lexicon
        )
        self.clock.advance(self.cost_model.cost_predictor)
        self._predictor_ticks += self.cost_model.cost_predictor

        session.priority = prediction.priority
        self.scheduler.admit(session.session_id, prediction.priority)
        logger.debug(
            f"[ENGINE] Admitted {session.session_id} as {prediction.priority.value} "
            f"(confidence {prediction.confidence:.3f}) at t={self.clock.now}"
        )

    def _ingest_comment(self, event: CommentEvent) -> None:
        self.store.append_comments(event.session_id, [comment_from_event(event)])
        if self.scheduler.is_tracked(event.session_id):
            self._pending.add(event.session_id)

    def _ingest_due(self, events: Sequence[Event], cursor: int) -> int:
        # Predictor cost advances the clock, which can make further events due
        while True:
            while cursor < len(events) and events[cursor].time <= self.clock.now:
                self.submit(events[cursor])
                cursor += 1
            if not self._inbox:
                return cursor
            self._drain_inbox()

    # ------------------------------------------------------------------
    # Loop
    # ------------------------------------------------------------------

    def run(self, trace: Iterable[Event]) -> RunResult:
        """
        Replay a time-sorted trace until every event is ingested and no
        tracked session has unprocessed comments.

        When nothing is pending, the clock jumps to the next event; idle time
        is not counted as busy ticks.
        """
        events = list(trace)
        for previous, current in zip(events, events[1:]):
            if current.time < previous.time:
                raise SimulationError(
                    "Trace events must be sorted by time",
                    details={"previous": previous.time, "current": current.time}
                )

        logger.info(
            f"[ENGINE] Run: {len(events)} events, policy {self.policy.value}, "
            f"mode {self.classifier_mode.value}, batch {self.scheduler_config.batch_size} "
            f"({self.scheduler_config.chunk_mode.value}), threshold {self.scheduler_config.confidence_threshold}"
        )
        cursor = 0
        while True:
            cursor = self._ingest_due(events, cursor)
            if not self._pending:
                if cursor >= len(events):
                    break
                self.clock.jump_to(events[cursor].time)
                continue
            self.step()

        result = self.result()
        logger.info(
            f"[ENGINE] Done at t={result.end_time}: {len(result.invocations)} classifications, "
            f"{len(result.alerts)} alerts, {result.total_ticks} busy ticks"
        )
        return result

    def step(self) -> Optional[str]:
        """
        Serve one scheduler visit.

        Returns:
            The visited session id, or None if nothing is enqueued
        """
        self._drain_inbox()
        session_id = self.scheduler.next()
        if session_id is None:
            if self._pending:
                raise InvariantViolationError(
                    "Sessions have pending comments but none is enqueued",
                    pending=sorted(self._pending)
                )
            return None
        self._visits += 1

        session = self.store.get(session_id)
        batch = self.scheduler.take_batch(session)
        if not batch:
            self.scheduler.requeue(session_id, session.priority)
            return session_id

        result = self._classify(session, batch)
        now = self.clock.now
        session.record_decision(now, result)
        self.alert_manager.on_classification(session, result, now)
        priority = self.scheduler.setting_priority(session)
        self.scheduler.requeue(session_id, priority)

        if session.unprocessed_count == 0:
            self._pending.discard(session_id)
        return session_id

    def _classify(self, session: MediaSession, batch: List) -> Classification:
        started = time.perf_counter() if self.measure_wall_time else None

        if self.classifier_mode == ClassifierMode.INCREMENTAL:
            delta = extract_delta(batch, self.lexicon)
            features = fold_delta(session, delta, len(batch))
            result = predict_incremental(self.classifier, session, features, self.stats)
            updates = self.stats.last_updates
            extracted = len(batch)
        else:
            upto = session.processed_count + len(batch)
            features = extract_batch(session, upto, self.lexicon)
            session.cached_features = features
            session.processed_count = upto
            result = predict(self.classifier, features)
            updates = self.classifier.feature_count
            extracted = upto

        wall = time.perf_counter() - started if started is not None else None

        charged = extracted if (
            self.classifier_mode == ClassifierMode.STANDARD and self.cost_model.charge_full_recompute
        ) else len(batch)
        cost = self.cost_model.classification_cost(charged)
        self.clock.advance(cost)

        if self.verify_invariants:
            self._verify(session, result)

        self._invocations.append(InvocationRecord(
            session_id=session.session_id,
            time=self.clock.now,
            batch_size=len(batch),
            comments_extracted=extracted,
            product_updates=updates,
            cost=cost,
            confidence=result.confidence,
            decision=result.decision,
            wall_seconds=wall,
        ))
        return result

    def _verify(self, session: MediaSession, result: Classification) -> None:
        expected = extract_batch(session, session.processed_count, self.lexicon)
        if expected.values != session.cached_features.values:
            raise InvariantViolationError(
                "Cached features differ from batch extraction",
                session_id=session.session_id,
                processed_count=session.processed_count,
            )
        reference = predict(self.classifier, expected)
        if reference != result:
            raise InvariantViolationError(
                "Incremental classification differs from full recomputation",
                session_id=session.session_id,
                incremental=result.confidence,
                full=reference.confidence,
            )

    # ------------------------------------------------------------------
    # Results
    # ------------------------------------------------------------------

    def result(self) -> RunResult:
        alert_times: Dict[str, List[int]] = {}
        for alert in self.alert_manager.alerts:
            alert_times.setdefault(alert.session_id, []).append(alert.raised_at)
        sessions = list(self.store.sessions())
        return RunResult(
            policy=self.policy,
            classifier_mode=self.classifier_mode,
            scheduler_config=self.scheduler_config,
            alert_threshold=self.alert_manager.threshold,
            alerts=list(self.alert_manager.alerts),
            alert_times=alert_times,
            created_at={s.session_id: s.created_at for s in sessions},
            labels={s.session_id: s.ground_truth_label for s in sessions if s.ground_truth_label is not None},
            invocations=list(self._invocations),
            predictor_ticks=self._predictor_ticks,
            total_ticks=self.clock.busy_ticks,
            end_time=self.clock.now,
            visits=self._visits,
        )


def run(
    trace: Iterable[Event],
    predictor: Optional[LRModel],
    classifier: Optional[LRModel],
    lexicon: SentimentLexicon,
    policy: SchedulingPolicy = SchedulingPolicy.DYNAMIC,
    classifier_mode: ClassifierMode = ClassifierMode.INCREMENTAL,
    scheduler_config: Optional[SchedulerConfig] = None,
    cost_model: Optional[CostModel] = None,
    alert_threshold: int = 2,
    alert_sink: Optional[AlertSink] = None,
    verify_invariants: bool = False
) -> RunResult:
    """Build an engine and replay a trace through it."""
    engine = DetectionEngine(
        predictor,
        classifier,
        lexicon,
        policy=policy,
        classifier_mode=classifier_mode,
        scheduler_config=scheduler_config,
        cost_model=cost_model,
        alert_threshold=alert_threshold,
        alert_sink=alert_sink,
        verify_invariants=verify_invariants,
    )
    return engine.run(trace)
