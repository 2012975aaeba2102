"""
Trace files.
JSONL event traces: one session or comment event per line, sorted by virtual time.
"""

import json
from pathlib import Path
from typing import Annotated, Iterable, List, Literal, Optional, Union

from loguru import logger
from pydantic import BaseModel, Field, TypeAdapter, ValidationError

from src.core.exceptions import MissingConfigError, TraceFormatError
from src.models import Comment, MediaSession, UserProfile


class SessionEvent(BaseModel):
    """A media session is posted."""
    t: Literal["session"] = "session"
    id: str = Field(min_length=1)
    created_at: int = Field(ge=0)
    followers: int = Field(ge=0)
    followings: int = Field(ge=0)
    posts: int = Field(ge=0)
    caption: str = ""
    label: Optional[bool] = None

    @property
    def time(self) -> int:
        return self.created_at


class CommentEvent(BaseModel):
    """A comment arrives on a session."""
    t: Literal["comment"] = "comment"
    session_id: str = Field(min_length=1)
    at: int = Field(ge=0)
    text: str

    @property
    def time(self) -> int:
        return self.at


TraceEvent = Annotated[Union[SessionEvent, CommentEvent], Field(discriminator="t")]
_EVENT_ADAPTER = TypeAdapter(TraceEvent)


def session_event_for(session: MediaSession) -> SessionEvent:
    """Session line for an existing session (label included when known)."""
    return SessionEvent(
        id=session.session_id,
        created_at=session.created_at,
        followers=session.poster.follower_count,
        followings=session.poster.following_count,
        posts=session.poster.post_count,
        caption=session.caption,
        label=session.ground_truth_label,
    )


def session_from_event(event: SessionEvent) -> MediaSession:
    """Fresh session (no comments) from a session line."""
    return MediaSession(
        session_id=event.id,
        poster=UserProfile(
            follower_count=event.followers,
            following_count=event.followings,
            post_count=event.posts,
        ),
        caption=event.caption,
        created_at=event.created_at,
        ground_truth_label=event.label,
    )


def comment_from_event(event: CommentEvent) -> Comment:
    return Comment(arrival_time=event.at, text=event.text)


def dump_event(event: Union[SessionEvent, CommentEvent]) -> str:
    """Serialize one event to its JSONL line (no trailing newline)."""
    return event.model_dump_json(exclude_none=True)


def write_trace(path: Path, events: Iterable[Union[SessionEvent, CommentEvent]]) -> int:
    """
    Write events as JSONL.

    Returns:
        Number of lines written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for event in events:
            f.write(dump_event(event) + "\n")
            count += 1
    logger.info(f"[TRACE] Wrote {count} events to {path}")
    return count


def parse_event(line: str, path: str = "<memory>", line_no: int = 0) -> Union[SessionEvent, CommentEvent]:
    """Parse and validate one trace line."""
    try:
        return _EVENT_ADAPTER.validate_python(json.loads(line))
    except json.JSONDecodeError as e:
        raise TraceFormatError(path, line_no, f"invalid JSON: {e.msg}") from None
    except ValidationError as e:
        raise TraceFormatError(path, line_no, f"invalid event: {e.errors()[0]['msg']}") from None


def read_trace(path: Path) -> List[Union[SessionEvent, CommentEvent]]:
    """
    Read and validate a trace file.

    Checks that events are sorted by time, session ids are unique, and
    comments reference an earlier session line.

    Raises:
        MissingConfigError: If the file does not exist
        TraceFormatError: On malformed or out-of-order lines
    """
    path = Path(path)
    if not path.exists():
        raise MissingConfigError(str(path))

    events: List[Union[SessionEvent, CommentEvent]] = []
    seen_sessions = set()
    last_time = 0
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line:
                continue
            event = parse_event(line, str(path), line_no)
            if event.time < last_time:
                raise TraceFormatError(
                    str(path), line_no, f"event at t={event.time} after t={last_time}"
                )
            if isinstance(event, SessionEvent):
                if event.id in seen_sessions:
                    raise TraceFormatError(str(path), line_no, f"duplicate session {event.id}")
                seen_sessions.add(event.id)
            elif event.session_id not in seen_sessions:
                raise TraceFormatError(
                    str(path), line_no, f"comment for unknown session {event.session_id}"
                )
            last_time = event.time
            events.append(event)

    logger.info(f"[TRACE] Read {len(events)} events ({len(seen_sessions)} sessions) from {path}")
    return events


def sessions_from_trace(events: Iterable[Union[SessionEvent, CommentEvent]]) -> List[MediaSession]:
    """
    Materialize complete sessions (all comments attached) from a trace.

    Used for training and end-of-session baselines, not by the streaming engine.
    """
    sessions = {}
    for event in events:
        if isinstance(event, SessionEvent):
            sessions[event.id] = session_from_event(event)
        else:
            sessions[event.session_id].comments.append(comment_from_event(event))
    return list(sessions.values())


def trace_labels(events: Iterable[Union[SessionEvent, CommentEvent]]) -> dict:
    """Session id → ground-truth label for labeled session lines."""
    return {
        event.id: event.label
        for event in events
        if isinstance(event, SessionEvent) and event.label is not None
    }
