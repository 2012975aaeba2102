"""Engine modules for session-sentry."""

__all__ = ["store", "sentiment", "features", "classifier", "scheduler", "alerts", "simulation", "data"]
