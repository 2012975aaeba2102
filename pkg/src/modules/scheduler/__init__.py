"""
Scheduler module.
Dynamic multilevel priority scheduling and the round-robin / static baselines.
"""

from .base import (
    SchedulerConfig,
    SchedulerState,
    BaseScheduler,
    setting_priority,
    take_batch,
)
from .policies import (
    DynamicPriorityScheduler,
    RoundRobinScheduler,
    StaticPriorityScheduler,
    create_scheduler,
)

__all__ = [
    'SchedulerConfig',
    'SchedulerState',
    'BaseScheduler',
    'setting_priority',
    'take_batch',
    'DynamicPriorityScheduler',
    'RoundRobinScheduler',
    'StaticPriorityScheduler',
    'create_scheduler',
]
