"""
Tests for the positive-decision alert rule.
"""

import pytest

from src.models import Classification
from src.modules.alerts import AlertManager


def classify(manager, session, decision, now, confidence=None):
    result = Classification(decision=decision, confidence=confidence if confidence is not None else (0.9 if decision else 0.1))
    session.record_decision(now, result)
    return manager.on_classification(session, result, now)


class TestAlertManager:
    """Alerting on positives since the last alert."""

    def test_threshold_two(self, make_session):
        """The second positive raises the alert."""
        manager = AlertManager(threshold=2)
        session = make_session("s1")
        assert classify(manager, session, True, 10) is None
        alert = classify(manager, session, True, 20)
        assert alert is not None
        assert alert.raised_at == 20
        assert alert.decision_indices == (0, 1)
        assert session.last_alert_index == 1

    def test_negatives_do_not_reset(self, make_session):
        """Positives need not be consecutive."""
        manager = AlertManager(threshold=2)
        session = make_session("s1")
        classify(manager, session, True, 1)
        classify(manager, session, False, 2)
        classify(manager, session, False, 3)
        alert = classify(manager, session, True, 4)
        assert alert.decision_indices == (0, 3)

    def test_count_restarts_after_alert(self, make_session):
        """Decisions before the last alert never count again."""
        manager = AlertManager(threshold=2)
        session = make_session("s1")
        for t in range(4):
            classify(manager, session, True, t)
        assert len(manager) == 2
        assert [a.decision_indices for a in manager.alerts_for("s1")] == [(0, 1), (2, 3)]
        assert classify(manager, session, True, 5) is None

    def test_negative_decision_never_alerts(self, make_session):
        """Only a positive decision can trigger an alert."""
        manager = AlertManager(threshold=1)
        session = make_session("s1")
        assert classify(manager, session, False, 1) is None
        assert classify(manager, session, True, 2).decision_indices == (1,)

    def test_sink_called(self, make_session, mocker):
        """Every alert reaches the sink once."""
        sink = mocker.Mock()
        manager = AlertManager(threshold=1, sink=sink)
        session = make_session("s1")
        alert = classify(manager, session, True, 7, confidence=0.75)
        sink.assert_called_once_with(alert)
        assert alert.to_dict()["confidence"] == 0.75

    def test_sessions_tracked_separately(self, make_session):
        """Counts are per session."""
        manager = AlertManager(threshold=2)
        a, b = make_session("a"), make_session("b")
        classify(manager, a, True, 1)
        classify(manager, b, True, 2)
        assert len(manager) == 0
        classify(manager, b, True, 3)
        assert manager.alerted_sessions() == ["b"]
        assert manager.alerts_for("a") == []

    def test_invalid_threshold(self):
        """Threshold must be at least one."""
        with pytest.raises(ValueError):
            AlertManager(threshold=0)
