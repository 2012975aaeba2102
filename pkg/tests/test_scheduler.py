"""
Tests for scheduling policies and the shared priority and batching rules.
"""

import pytest

from src.core.exceptions import (
    DoubleAdmissionError,
    EmptyHistoryError,
    InvalidConfigError,
    SchedulerError,
    StillEnqueuedError,
)
from src.core.settings import ChunkMode, SchedulingPolicy
from src.models import Classification, Priority
from src.modules.scheduler import (
    DynamicPriorityScheduler,
    RoundRobinScheduler,
    SchedulerConfig,
    StaticPriorityScheduler,
    create_scheduler,
    setting_priority,
    take_batch,
)

HIGH, LOW = Priority.HIGH, Priority.LOW


def drain(scheduler, priorities, steps):
    """Serve `steps` sessions, requeueing each with its fixed priority."""
    order = []
    for _ in range(steps):
        sid = scheduler.next()
        if sid is None:
            break
        order.append(sid)
        scheduler.requeue(sid, priorities[sid])
    return order


class TestSettingPriority:
    """Mean-confidence reprioritization."""

    def test_threshold(self, make_session):
        """HIGH iff the history mean reaches the threshold."""
        session = make_session()
        session.record_decision(1, Classification(False, 0.1))
        assert setting_priority(session, 0.2) == LOW
        session.record_decision(2, Classification(False, 0.3))
        assert setting_priority(session, 0.2) == HIGH
        assert session.priority == HIGH

    def test_whole_history(self, make_session):
        """One high confidence does not outweigh a long low history."""
        session = make_session()
        for t in range(9):
            session.record_decision(t, Classification(False, 0.0))
        session.record_decision(9, Classification(True, 1.0))
        assert setting_priority(session, 0.2) == LOW

    def test_empty_history(self, make_session):
        """A never-classified session has no priority to compute."""
        with pytest.raises(EmptyHistoryError):
            setting_priority(make_session(), 0.2)


class TestTakeBatch:
    """Oldest unprocessed comments."""

    def test_capped_and_all(self, make_session):
        """Capped takes at most batch_size; all takes everything pending."""
        session = make_session(texts=[str(i) for i in range(25)])
        session.processed_count = 3
        assert [c.text for c in take_batch(session, 10, ChunkMode.CAPPED)] == [str(i) for i in range(3, 13)]
        assert len(take_batch(session, 10, ChunkMode.ALL_AVAILABLE)) == 22
        session.processed_count = 25
        assert take_batch(session, 10) == []

    def test_config_validation(self):
        """Config rejects out-of-range values."""
        with pytest.raises(ValueError):
            SchedulerConfig(batch_size=0)
        with pytest.raises(ValueError):
            SchedulerConfig(confidence_threshold=1.1)
        assert SchedulerConfig(chunk_mode="all").chunk_mode == ChunkMode.ALL_AVAILABLE


class TestDynamicPriorityScheduler:
    """Three-queue rotating policy."""

    def test_admission_queues(self):
        """HIGH goes to q1, LOW to q2."""
        s = DynamicPriorityScheduler()
        s.admit("h", HIGH)
        s.admit("l", LOW)
        assert s.snapshot() == {"q1": ["h"], "q2": ["l"], "q3": []}
        assert len(s) == 2

    def test_requeue_queues(self):
        """Served HIGH goes to q2, served LOW to q3."""
        s = DynamicPriorityScheduler()
        s.admit("a", HIGH)
        s.admit("b", HIGH)
        assert s.next() == "a"
        s.requeue("a", LOW)
        assert s.next() == "b"
        s.requeue("b", HIGH)
        assert s.snapshot() == {"q1": [], "q2": ["b"], "q3": ["a"]}

    def test_rotation(self):
        """An empty q1 promotes q2 and q3."""
        s = DynamicPriorityScheduler()
        s.admit("l1", LOW)
        s.admit("l2", LOW)
        assert s.next() == "l1"
        assert s.rotations == 1
        s.requeue("l1", LOW)
        assert s.snapshot() == {"q1": ["l2"], "q2": [], "q3": ["l1"]}

    def test_high_served_every_pass(self):
        """HIGH sessions come around twice as often as LOW ones."""
        s = DynamicPriorityScheduler()
        priorities = {"h": HIGH, "a": LOW, "b": LOW, "c": LOW}
        s.admit("h", HIGH)
        for sid in "abc":
            s.admit(sid, LOW)
        order = drain(s, priorities, 40)
        assert order.count("h") >= 2 * order.count("a") - 1

    def test_no_starvation(self):
        """Every admitted session is served within two rotations."""
        s = DynamicPriorityScheduler()
        priorities = {f"h{i}": HIGH for i in range(5)}
        priorities["low"] = LOW
        for sid in sorted(priorities):
            s.admit(sid, priorities[sid])
        order = drain(s, priorities, 30)
        assert "low" in order[:len(priorities) + 1]
        gaps = [j - i for i, j in zip(
            [k for k, sid in enumerate(order) if sid == "low"],
            [k for k, sid in enumerate(order) if sid == "low"][1:],
        )]
        assert all(gap <= 2 * len(priorities) for gap in gaps)

    def test_empty(self):
        """next() returns None with nothing enqueued."""
        assert DynamicPriorityScheduler().next() is None

    def test_errors(self):
        """Double admission, unknown and still-enqueued requeues."""
        s = DynamicPriorityScheduler()
        s.admit("a", HIGH)
        with pytest.raises(DoubleAdmissionError):
            s.admit("a", LOW)
        with pytest.raises(StillEnqueuedError):
            s.requeue("a", HIGH)
        with pytest.raises(SchedulerError):
            s.requeue("ghost", HIGH)

    def test_out_for_processing(self):
        """A served session is not enqueued until requeued."""
        s = DynamicPriorityScheduler()
        s.admit("a", HIGH)
        assert "a" in s
        s.next()
        assert "a" not in s
        assert s.is_tracked("a")
        s.requeue("a", LOW)
        assert "a" in s


class TestRoundRobinScheduler:
    """Priority-free cycle."""

    def test_cycle_ignores_priority(self):
        """Sessions cycle in admission order whatever their priority."""
        s = RoundRobinScheduler()
        priorities = {"a": LOW, "b": HIGH, "c": LOW}
        for sid, p in priorities.items():
            s.admit(sid, p)
        assert drain(s, priorities, 6) == ["a", "b", "c", "a", "b", "c"]


class TestStaticPriorityScheduler:
    """Initial-prediction-only baseline."""

    def test_low_sessions_parked(self):
        """Initially-LOW sessions are never served."""
        s = StaticPriorityScheduler()
        s.admit("h", HIGH)
        s.admit("l", LOW)
        assert drain(s, {"h": LOW, "l": LOW}, 4) == ["h", "h", "h", "h"]
        assert not s.is_tracked("l")
        assert s.is_tracked("h")
        assert s.parked_count == 1
        assert s.snapshot()["parked"] == ["l"]


class TestCreateScheduler:
    """Factory."""

    @pytest.mark.parametrize("policy,cls", [
        ("dynamic", DynamicPriorityScheduler),
        (SchedulingPolicy.ROUND_ROBIN, RoundRobinScheduler),
        ("static", StaticPriorityScheduler),
    ])
    def test_policies(self, policy, cls):
        """Each policy name maps to its scheduler."""
        scheduler = create_scheduler(policy, SchedulerConfig(batch_size=5))
        assert isinstance(scheduler, cls)
        assert scheduler.config.batch_size == 5

    def test_unknown_policy(self):
        """Unknown names are configuration errors."""
        with pytest.raises(InvalidConfigError):
            create_scheduler("fifo")
