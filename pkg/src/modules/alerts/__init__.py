"""
Alerts module.
Positive-decision counting and alert emission.
"""

from .alert_manager import AlertManager, AlertSink

__all__ = ['AlertManager', 'AlertSink']
