"""session-sentry - streaming cyberbullying detection engine and simulator."""

__version__ = "0.1.0"
__author__ = "Session Sentry Development Team"

from .config import config

__all__ = ["config"]
