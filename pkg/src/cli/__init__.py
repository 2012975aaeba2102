"""
Command-line interface for session-sentry.
"""
