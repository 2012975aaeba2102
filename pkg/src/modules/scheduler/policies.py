"""
Scheduling policies.
Dynamic multilevel priority scheduler plus round-robin and static-priority baselines.
"""

from collections import deque
from typing import Deque, Dict, List, Optional, Set, Union

from loguru import logger

from src.core.exceptions import InvalidConfigError
from src.core.settings import SchedulingPolicy
from src.models import Priority
from src.modules.scheduler.base import BaseScheduler, SchedulerConfig, SchedulerState


class DynamicPriorityScheduler(BaseScheduler):
    """
    Three-queue rotating scheduler.

    Admission: HIGH → q1, LOW → q2. Served sessions come back HIGH → q2,
    LOW → q3. When q1 drains, the queues rotate (q1←q2, q2←q3, q3←empty),
    so every session is served at least once per two rotations.
    """

    policy = SchedulingPolicy.DYNAMIC

    def __init__(self, config: Optional[SchedulerConfig] = None):
        super().__init__(config)
        self.state = SchedulerState(policy=self.policy, config=self.config)

    @property
    def rotations(self) -> int:
        return self.state.rotations

    def admit(self, session_id: str, initial_priority: Priority) -> None:
        self._register(session_id)
        if initial_priority == Priority.HIGH:
            self.state.q1.append(session_id)
        else:
            self.state.q2.append(session_id)

    def next(self) -> Optional[str]:
        state = self.state
        while not state.q1:
            if not state.q2 and not state.q3:
                return None
            state.q1, state.q2, state.q3 = state.q2, state.q3, deque()
            state.rotations += 1
            logger.debug(
                f"[SCHEDULER] Rotation {state.rotations}: q1={len(state.q1)} q2={len(state.q2)}"
            )
        return self._served(state.q1.popleft())

    def requeue(self, session_id: str, new_priority: Priority) -> None:
        self._check_requeue(session_id)
        if new_priority == Priority.HIGH:
            self.state.q2.append(session_id)
        else:
            self.state.q3.append(session_id)

    def snapshot(self) -> Dict[str, List[str]]:
        return {
            "q1": list(self.state.q1),
            "q2": list(self.state.q2),
            "q3": list(self.state.q3),
        }


class RoundRobinScheduler(BaseScheduler):
    """Priority-free cycle over sessions in admission order."""

    policy = SchedulingPolicy.ROUND_ROBIN

    def __init__(self, config: Optional[SchedulerConfig] = None):
        super().__init__(config)
        self._queue: Deque[str] = deque()

    def admit(self, session_id: str, initial_priority: Priority) -> None:
        self._register(session_id)
        self._queue.append(session_id)

    def next(self) -> Optional[str]:
        if not self._queue:
            return None
        return self._served(self._queue.popleft())

    def requeue(self, session_id: str, new_priority: Priority) -> None:
        self._check_requeue(session_id)
        self._queue.append(session_id)

    def snapshot(self) -> Dict[str, List[str]]:
        return {"queue": list(self._queue)}


class StaticPriorityScheduler(BaseScheduler):
    """
    Serves only sessions predicted HIGH at creation, round-robin among them.

    Initially-LOW sessions are parked and never served.
    """

    policy = SchedulingPolicy.STATIC

    def __init__(self, config: Optional[SchedulerConfig] = None):
        super().__init__(config)
        self._queue: Deque[str] = deque()
        self._parked: Set[str] = set()

    def admit(self, session_id: str, initial_priority: Priority) -> None:
        self._register(session_id)
        if initial_priority == Priority.HIGH:
            self._queue.append(session_id)
        else:
            self._parked.add(session_id)

    def next(self) -> Optional[str]:
        if not self._queue:
            return None
        return self._served(self._queue.popleft())

    def requeue(self, session_id: str, new_priority: Priority) -> None:
        self._check_requeue(session_id)
        self._queue.append(session_id)

    def is_tracked(self, session_id: str) -> bool:
        return session_id in self._admitted and session_id not in self._parked

    @property
    def parked_count(self) -> int:
        return len(self._parked)

    def snapshot(self) -> Dict[str, List[str]]:
        return {"queue": list(self._queue), "parked": sorted(self._parked)}


_POLICIES = {
    SchedulingPolicy.DYNAMIC: DynamicPriorityScheduler,
    SchedulingPolicy.ROUND_ROBIN: RoundRobinScheduler,
    SchedulingPolicy.STATIC: StaticPriorityScheduler,
}


def create_scheduler(
    policy: Union[SchedulingPolicy, str],
    config: Optional[SchedulerConfig] = None
) -> BaseScheduler:
    """
    Build a scheduler for a policy.

    Raises:
        InvalidConfigError: If the policy name is unknown
    """
    try:
        policy = SchedulingPolicy(policy)
    except ValueError:
        raise InvalidConfigError(
            "policy", policy, "one of " + ", ".join(p.value for p in SchedulingPolicy)
        ) from None
    return _POLICIES[policy](config)
