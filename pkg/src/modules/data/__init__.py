"""
Data module for session-sentry.
Handles trace, alert and metrics file formats.
"""

from .traces import (
    SessionEvent,
    CommentEvent,
    TraceEvent,
    read_trace,
    write_trace,
    parse_event,
    dump_event,
    session_from_event,
    session_event_for,
    comment_from_event,
    sessions_from_trace,
    trace_labels,
)
from .reports import (
    METRICS_COLUMNS,
    GAIN_COLUMNS,
    AlertLine,
    AlertWriter,
    write_alerts,
    read_alerts,
    write_metrics,
    write_gain_table,
    read_table,
)

__all__ = [
    'SessionEvent',
    'CommentEvent',
    'TraceEvent',
    'read_trace',
    'write_trace',
    'parse_event',
    'dump_event',
    'session_from_event',
    'session_event_for',
    'comment_from_event',
    'sessions_from_trace',
    'trace_labels',
    'METRICS_COLUMNS',
    'GAIN_COLUMNS',
    'AlertLine',
    'AlertWriter',
    'write_alerts',
    'read_alerts',
    'write_metrics',
    'write_gain_table',
    'read_table',
]
