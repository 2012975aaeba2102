"""
Core infrastructure for session-sentry.
Provides the error hierarchy and validated settings.
"""

# Exception hierarchy
from src.core.exceptions import (
    # Base
    SentryError,
    ErrorSeverity,

    # Store
    SessionStoreError,
    DuplicateSessionError,
    UnknownSessionError,
    CommentOrderError,

    # Features / model
    FeatureError,
    SchemaMismatchError,
    InvalidFeatureError,
    FeatureRangeError,
    DeltaMismatchError,

    # Training
    TrainingError,
    EmptyDatasetError,
    SingleClassDatasetError,

    # Scheduler
    SchedulerError,
    DoubleAdmissionError,
    StillEnqueuedError,
    EmptyHistoryError,

    # Simulation
    SimulationError,
    MissingModelError,
    InvariantViolationError,
    UnattainablePrecisionError,
    WorkloadConfigError,

    # Formats
    FormatError,
    TraceFormatError,
    LexiconFormatError,
    ModelFileError,

    # Configuration
    ConfigurationError,
    MissingConfigError,
    InvalidConfigError,

    # Utilities
    exit_code_for
)

# Settings and configuration
from src.core.settings import (
    Settings,
    SchedulingPolicy,
    ClassifierMode,
    ChunkMode,
    LogLevel,
    get_settings,
    reload_settings,
    override_settings
)

__all__ = [
    # Exceptions
    'SentryError',
    'ErrorSeverity',
    'SessionStoreError',
    'DuplicateSessionError',
    'UnknownSessionError',
    'CommentOrderError',
    'FeatureError',
    'SchemaMismatchError',
    'InvalidFeatureError',
    'FeatureRangeError',
    'DeltaMismatchError',
    'TrainingError',
    'EmptyDatasetError',
    'SingleClassDatasetError',
    'SchedulerError',
    'DoubleAdmissionError',
    'StillEnqueuedError',
    'EmptyHistoryError',
    'SimulationError',
    'MissingModelError',
    'InvariantViolationError',
    'UnattainablePrecisionError',
    'WorkloadConfigError',
    'FormatError',
    'TraceFormatError',
    'LexiconFormatError',
    'ModelFileError',
    'ConfigurationError',
    'MissingConfigError',
    'InvalidConfigError',
    'exit_code_for',

    # Settings
    'Settings',
    'SchedulingPolicy',
    'ClassifierMode',
    'ChunkMode',
    'LogLevel',
    'get_settings',
    'reload_settings',
    'override_settings'
]
