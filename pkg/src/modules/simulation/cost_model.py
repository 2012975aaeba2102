"""
Virtual-time cost model and clock.
"""

from dataclasses import dataclass

from src.core.exceptions import InvalidConfigError, SimulationError


@dataclass(frozen=True)
class CostModel:
    """Tick costs of the engine's units of work."""
    cost_predictor: int = 1
    cost_fixed_classify: int = 5
    cost_per_comment_feature: int = 1
    charge_full_recompute: bool = False

    def __post_init__(self):
        for name in ("cost_predictor", "cost_fixed_classify", "cost_per_comment_feature"):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise InvalidConfigError(name, value, "non-negative integer ticks")
            object.__setattr__(self, name, int(value))
        if self.cost_fixed_classify == 0 and self.cost_per_comment_feature == 0:
            raise InvalidConfigError(
                "cost_fixed_classify", 0, "positive when cost_per_comment_feature is 0"
            )

    @classmethod
    def from_settings(cls, settings) -> "CostModel":
        return cls(**settings.get_cost_model())

    def classification_cost(self, comments_folded: int) -> int:
        """Ticks for one classification that folds `comments_folded` comments."""
        return self.cost_fixed_classify + self.cost_per_comment_feature * comments_folded


class VirtualClock:
    """
    Integer tick counter.

    `advance` consumes ticks (work); `jump_to` skips idle time and does not
    count toward busy_ticks.
    """

    def __init__(self, start: int = 0):
        self.now = start
        self.busy_ticks = 0

    def advance(self, ticks: int) -> int:
        if ticks < 0:
            raise SimulationError(f"Cannot advance the clock by {ticks} ticks")
        self.now += ticks
        self.busy_ticks += ticks
        return self.now

    def jump_to(self, time: int) -> int:
        if time > self.now:
            self.now = time
        return self.now
