"""
Session Store
In-memory registry of media sessions keyed by session id.
"""

from typing import Dict, Iterable, Iterator, List, Sequence, Union
from loguru import logger

from src.core.exceptions import (
    CommentOrderError,
    DuplicateSessionError,
    SessionStoreError,
    UnknownSessionError,
)
from src.models import Comment, MediaSession
from src.modules.data.traces import CommentEvent, SessionEvent, session_event_for


class SessionStore:
    """
    Memory-resident session store.

    Append-only with respect to comments: nothing here removes or reorders them.
    All mutations are expected to come from the engine loop.
    """

    def __init__(self):
        self._sessions: Dict[str, MediaSession] = {}

    def insert(self, session: MediaSession) -> None:
        """
        Register a new session.

        Raises:
            DuplicateSessionError: If the id is already present
            SessionStoreError: If the session already carries classification state
        """
        if session.session_id in self._sessions:
            raise DuplicateSessionError(session.session_id)
        if not session.is_fresh():
            raise SessionStoreError(
                f"Session {session.session_id} must be inserted before any classification",
                details={"session_id": session.session_id}
            )
        self._check_order(session.session_id, None, session.comments)
        self._sessions[session.session_id] = session
        logger.debug(f"[STORE] Inserted session {session.session_id}")

    def get(self, session_id: str) -> MediaSession:
        """Get a session by id."""
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id) from None

    def append_comments(self, session_id: str, comments: Sequence[Comment]) -> None:
        """
        Append comments to a session's stream.

        Cached features, processed_count and histories are left untouched.

        Raises:
            UnknownSessionError: If the session does not exist
            CommentOrderError: If arrival times would decrease
        """
        session = self.get(session_id)
        if not comments:
            return
        self._check_order(session_id, session.last_arrival_time, comments)
        session.comments.extend(comments)

    def unprocessed_count(self, session_id: str) -> int:
        """Comments not yet folded into the session's features."""
        return self.get(session_id).unprocessed_count

    def ids(self) -> List[str]:
        """Session ids in insertion order."""
        return list(self._sessions)

    def sessions(self) -> Iterator[MediaSession]:
        """Iterate sessions in insertion order."""
        return iter(self._sessions.values())

    def export_events(self) -> List[Union[SessionEvent, CommentEvent]]:
        """
        Export the store as trace events, sorted by time.

        Session lines precede their comments at equal ticks, so the export can
        be replayed through the trace reader.
        """
        keyed = []
        for order, session in enumerate(self._sessions.values()):
            keyed.append(((session.created_at, 0, order, 0), session_event_for(session)))
            for position, comment in enumerate(session.comments):
                keyed.append((
                    (comment.arrival_time, 1, order, position),
                    CommentEvent(session_id=session.session_id, at=comment.arrival_time, text=comment.text)
                ))
        keyed.sort(key=lambda item: item[0])
        return [event for _, event in keyed]

    def __len__(self) -> int:
        return len(self._sessions)

    def __contains__(self, session_id: object) -> bool:
        return session_id in self._sessions

    @staticmethod
    def _check_order(session_id: str, last_time, comments: Iterable[Comment]) -> None:
        previous = last_time
        for comment in comments:
            if previous is not None and comment.arrival_time < previous:
                raise CommentOrderError(session_id, previous, comment.arrival_time)
            previous = comment.arrival_time
