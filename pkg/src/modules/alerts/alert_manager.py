"""
Alert manager.
Raises an alert once a session collects enough positive decisions since its last alert.
"""

from typing import Callable, Dict, List, Optional

from loguru import logger

from src.models import AlertRecord, Classification, MediaSession

AlertSink = Callable[[AlertRecord], None]


class AlertManager:
    """
    Counts positive decisions since the last alert (not consecutive runs, not
    a window). Negative decisions never reset the count.
    """

    def __init__(self, threshold: int = 2, sink: Optional[AlertSink] = None):
        if threshold < 1:
            raise ValueError(f"Alert threshold must be at least 1, got {threshold}")
        self.threshold = threshold
        self.sink = sink
        self.alerts: List[AlertRecord] = []
        self._by_session: Dict[str, List[AlertRecord]] = {}

    def on_classification(
        self,
        session: MediaSession,
        result: Classification,
        now: int
    ) -> Optional[AlertRecord]:
        """
        Check the alert rule after a decision was appended to the session's history.

        Returns:
            The new AlertRecord, or None
        """
        if not result.decision:
            return None

        start = 0 if session.last_alert_index is None else session.last_alert_index + 1
        history = session.decision_history
        positives = tuple(i for i in range(start, len(history)) if history[i].decision)
        if len(positives) < self.threshold:
            return None

        alert = AlertRecord(
            session_id=session.session_id,
            raised_at=now,
            decision_indices=positives,
            confidence_at_alert=result.confidence,
        )
        session.last_alert_index = positives[-1]
        self.alerts.append(alert)
        self._by_session.setdefault(session.session_id, []).append(alert)
        logger.info(
            f"[ALERT] {session.session_id} at t={now} "
            f"({alert.positives_since_last} positives, confidence {result.confidence:.3f})"
        )
        if self.sink is not None:
            self.sink(alert)
        return alert

    def alerts_for(self, session_id: str) -> List[AlertRecord]:
        """Alerts raised for one session, oldest first."""
        return list(self._by_session.get(session_id, []))

    def alerted_sessions(self) -> List[str]:
        """Ids with at least one alert, in order of first alert."""
        return list(self._by_session)

    def __len__(self) -> int:
        return len(self.alerts)
