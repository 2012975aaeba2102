"""
Session store module.
In-memory media session registry shared by the engine and simulator.
"""

from .session_store import SessionStore

__all__ = ['SessionStore']
