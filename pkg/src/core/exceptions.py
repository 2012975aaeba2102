"""
Custom exception hierarchy for session-sentry.
Provides structured error handling across the detection engine, simulator and CLI.
"""

from typing import Optional, Dict, Any
from enum import Enum


class ErrorSeverity(Enum):
    """Error severity levels for logging and handling decisions."""
    LOW = "low"       # Can continue, minor issue
    MEDIUM = "medium" # Should warn user, may affect results
    HIGH = "high"     # Stop current operation
    CRITICAL = "critical"  # Engine state is no longer trustworthy


class SentryError(Exception):
    """Base exception for all session-sentry errors."""

    def __init__(
        self,
        message: str,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        details: Optional[Dict[str, Any]] = None,
        recovery_action: Optional[str] = None
    ):
        super().__init__(message)
        self.message = message
        self.severity = severity
        self.details = details or {}
        self.recovery_action = recovery_action

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary for CLI/JSON reporting."""
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "severity": self.severity.value,
            "details": self.details,
            "recovery_action": self.recovery_action
        }


# Session store errors
class SessionStoreError(SentryError):
    """Session store related errors."""
    pass


class DuplicateSessionError(SessionStoreError):
    """Session id already present in the store."""
    def __init__(self, session_id: str):
        super().__init__(
            f"Session {session_id} already exists",
            severity=ErrorSeverity.HIGH,
            details={"session_id": session_id},
            recovery_action="Use a unique session id per media session"
        )


class UnknownSessionError(SessionStoreError):
    """Session id not present in the store."""
    def __init__(self, session_id: str):
        super().__init__(
            f"Unknown session {session_id}",
            severity=ErrorSeverity.HIGH,
            details={"session_id": session_id},
            recovery_action="Insert the session before appending comments"
        )


class CommentOrderError(SessionStoreError):
    """New comments arrive before the latest stored comment."""
    def __init__(self, session_id: str, last_time: int, offending_time: int):
        super().__init__(
            f"Comment at t={offending_time} precedes last comment at t={last_time} "
            f"in session {session_id}",
            severity=ErrorSeverity.HIGH,
            details={
                "session_id": session_id,
                "last_time": last_time,
                "offending_time": offending_time
            },
            recovery_action="Sort comment events by arrival time"
        )


# Feature and model errors
class FeatureError(SentryError):
    """Feature extraction and schema errors."""
    pass


class SchemaMismatchError(FeatureError):
    """Feature vector or model bound to a different schema."""
    def __init__(self, expected: str, actual: str):
        super().__init__(
            f"Schema mismatch: expected {expected}, got {actual}",
            severity=ErrorSeverity.HIGH,
            details={"expected": expected, "actual": actual},
            recovery_action="Use the model trained for this feature schema"
        )


class InvalidFeatureError(FeatureError):
    """Feature vector contains NaN/infinity or has the wrong length."""
    def __init__(self, message: str, schema_id: Optional[str] = None):
        super().__init__(
            message,
            severity=ErrorSeverity.HIGH,
            details={"schema_id": schema_id} if schema_id else {},
        )


class FeatureRangeError(FeatureError):
    """Requested comment prefix is out of range."""
    def __init__(self, upto: int, available: int):
        super().__init__(
            f"Prefix {upto} out of range for session with {available} comments",
            severity=ErrorSeverity.HIGH,
            details={"upto": upto, "available": available}
        )


class DeltaMismatchError(FeatureError):
    """Additive delta does not match the folded batch."""
    def __init__(self, message: str, **details: Any):
        super().__init__(
            message,
            severity=ErrorSeverity.CRITICAL,
            details=details,
            recovery_action="Compute the delta over exactly the unprocessed comments"
        )


# Training errors
class TrainingError(SentryError):
    """Classifier training errors."""
    pass


class EmptyDatasetError(TrainingError):
    """Not enough examples to train."""
    def __init__(self, count: int):
        super().__init__(
            f"Training needs at least 2 examples, got {count}",
            severity=ErrorSeverity.HIGH,
            details={"count": count}
        )


class SingleClassDatasetError(TrainingError):
    """Dataset contains a single label."""
    def __init__(self, label: bool, count: int):
        super().__init__(
            f"All {count} training examples are labeled {label}",
            severity=ErrorSeverity.HIGH,
            details={"label": label, "count": count},
            recovery_action="Include both cyberbullying and benign sessions"
        )


# Scheduler errors
class SchedulerError(SentryError):
    """Scheduler queue errors."""
    pass


class DoubleAdmissionError(SchedulerError):
    """Session admitted twice."""
    def __init__(self, session_id: str):
        super().__init__(
            f"Session {session_id} already admitted",
            severity=ErrorSeverity.HIGH,
            details={"session_id": session_id}
        )


class StillEnqueuedError(SchedulerError):
    """Requeue of a session that is still waiting in a queue."""
    def __init__(self, session_id: str):
        super().__init__(
            f"Session {session_id} is still enqueued",
            severity=ErrorSeverity.HIGH,
            details={"session_id": session_id},
            recovery_action="Only requeue sessions returned by next()"
        )


class EmptyHistoryError(SchedulerError):
    """Priority requested for a session that was never classified."""
    def __init__(self, session_id: str):
        super().__init__(
            f"Session {session_id} has no confidence history",
            severity=ErrorSeverity.HIGH,
            details={"session_id": session_id}
        )


# Simulation errors
class SimulationError(SentryError):
    """Simulator and experiment errors."""
    pass


class MissingModelError(SimulationError):
    """A required model was not supplied."""
    def __init__(self, role: str):
        super().__init__(
            f"Missing {role} model",
            severity=ErrorSeverity.HIGH,
            details={"role": role},
            recovery_action="Train models with `session-sentry train` first"
        )


class InvariantViolationError(SimulationError):
    """Engine state diverged from its batch oracle."""
    def __init__(self, message: str, **details: Any):
        super().__init__(message, severity=ErrorSeverity.CRITICAL, details=details)


class UnattainablePrecisionError(SimulationError):
    """No predictor threshold reaches the precision floor."""
    def __init__(self, min_precision: float, best_precision: float):
        super().__init__(
            f"No threshold reaches precision {min_precision:.3f} "
            f"(best {best_precision:.3f})",
            severity=ErrorSeverity.HIGH,
            details={"min_precision": min_precision, "best_precision": best_precision},
            recovery_action="Lower the minimum predictor precision"
        )


class WorkloadConfigError(SimulationError):
    """Invalid workload generator parameters."""
    def __init__(self, field: str, value: Any, expected: str):
        super().__init__(
            f"Invalid workload {field}: {value} (expected: {expected})",
            severity=ErrorSeverity.HIGH,
            details={"field": field, "value": value, "expected": expected}
        )


# File format errors
class FormatError(SentryError):
    """Input file format errors."""
    pass


class TraceFormatError(FormatError):
    """Malformed or unsorted trace file."""
    def __init__(self, path: str, line: int, reason: str):
        super().__init__(
            f"{path}:{line}: {reason}",
            severity=ErrorSeverity.HIGH,
            details={"path": path, "line": line, "reason": reason}
        )


class LexiconFormatError(FormatError):
    """Malformed lexicon or negative-word file."""
    def __init__(self, path: str, line: int, reason: str):
        super().__init__(
            f"{path}:{line}: {reason}",
            severity=ErrorSeverity.HIGH,
            details={"path": path, "line": line, "reason": reason}
        )


class ModelFileError(FormatError):
    """Unreadable or invalid model file."""
    def __init__(self, path: str, reason: str):
        super().__init__(
            f"{path}: {reason}",
            severity=ErrorSeverity.HIGH,
            details={"path": path, "reason": reason}
        )


# Configuration errors
class ConfigurationError(SentryError):
    """Configuration and setup errors."""
    pass


class MissingConfigError(ConfigurationError):
    """Required configuration or input file missing."""
    def __init__(self, config_key: str):
        super().__init__(
            f"Missing required configuration: {config_key}",
            severity=ErrorSeverity.CRITICAL,
            details={"missing_key": config_key},
            recovery_action=f"Provide {config_key} on the command line or in .env"
        )


class InvalidConfigError(ConfigurationError):
    """Invalid configuration value."""
    def __init__(self, config_key: str, value: Any, expected: str):
        super().__init__(
            f"Invalid {config_key}: {value} (expected: {expected})",
            severity=ErrorSeverity.HIGH,
            details={"key": config_key, "value": value, "expected": expected},
            recovery_action=f"Update {config_key}"
        )


USAGE_ERRORS = (ConfigurationError, FormatError, WorkloadConfigError)


def exit_code_for(error: BaseException) -> int:
    """
    Map an error to the CLI exit code contract.

    Returns:
        2 for usage/validation failures, 1 for runtime failures
    """
    if isinstance(error, USAGE_ERRORS):
        return 2
    return 1
