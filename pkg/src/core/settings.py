"""
Application settings with Pydantic validation.
Provides type-safe engine, scheduler and training tunables with validation and defaults.
"""

from typing import Optional, Dict, Any, List
from enum import Enum

from loguru import logger
from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings

from src.core.exceptions import ConfigurationError


class SchedulingPolicy(str, Enum):
    """Scheduling policy."""
    DYNAMIC = "dynamic"
    ROUND_ROBIN = "round-robin"
    STATIC = "static"


class ClassifierMode(str, Enum):
    """Classification path used by the engine."""
    INCREMENTAL = "incremental"
    STANDARD = "standard"


class ChunkMode(str, Enum):
    """How many unprocessed comments one classification consumes."""
    CAPPED = "capped"
    ALL_AVAILABLE = "all"


class LogLevel(str, Enum):
    """Log level enum."""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class Settings(BaseSettings):
    """
    Engine settings with validation.

    Settings are loaded from environment variables and .env file.
    All values are validated on load.
    """

    # Scheduler
    policy: SchedulingPolicy = Field(
        default=SchedulingPolicy.DYNAMIC,
        description="Scheduling policy (dynamic/round-robin/static)"
    )

    confidence_threshold: float = Field(
        default=0.2,
        description="Mean cyberbullying confidence at which a session becomes HIGH priority",
        ge=0.0,
        le=1.0
    )

    batch_size: int = Field(
        default=10,
        description="Comments folded per classification in capped mode",
        ge=1,
        le=10_000
    )

    chunk_mode: ChunkMode = Field(
        default=ChunkMode.CAPPED,
        description="capped: up to batch_size comments; all: every unprocessed comment"
    )

    # Classification
    classifier_mode: ClassifierMode = Field(
        default=ClassifierMode.INCREMENTAL,
        description="incremental (cached features/products) or standard (full recompute)"
    )

    alert_threshold: int = Field(
        default=2,
        description="Positive decisions since the last alert needed to raise a new alert",
        ge=1,
        le=100
    )

    min_predictor_precision: float = Field(
        default=0.3,
        description="Precision floor used when tuning the initial predictor threshold",
        ge=0.0,
        le=1.0
    )

    # Virtual-time cost model (ticks)
    cost_predictor: int = Field(default=1, description="Ticks per initial prediction", ge=0)
    cost_fixed_classify: int = Field(default=5, description="Fixed ticks per classification", ge=0)
    cost_per_comment_feature: int = Field(default=1, description="Ticks per folded comment", ge=0)
    charge_full_recompute: bool = Field(
        default=False,
        description="Charge standard mode for every comment it re-extracts"
    )

    # Training
    learning_rate: float = Field(default=0.5, description="Gradient descent step", gt=0, le=10)
    epochs: int = Field(default=1500, description="Full-batch gradient descent epochs", ge=1)
    l2: float = Field(default=1e-3, description="L2 penalty on weights", ge=0)
    seed: int = Field(default=7, description="Seed for training and workload generation", ge=0)

    # Logging
    log_level: LogLevel = Field(default=LogLevel.INFO, description="Logging level")

    # Development
    verify_invariants: bool = Field(
        default=False,
        description="Re-run the batch extractor after every classification"
    )

    @field_validator('confidence_threshold')
    @classmethod
    def validate_threshold(cls, v):
        """Reject NaN thresholds (ge/le accept neither, but be explicit)."""
        if v != v:
            raise ValueError("confidence_threshold must be a number")
        return v

    @model_validator(mode='after')
    def validate_costs(self):
        """A classification must cost something or virtual time never advances."""
        if self.cost_fixed_classify == 0 and self.cost_per_comment_feature == 0:
            raise ValueError("At least one classification cost must be positive")
        return self

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "SENTRY_",
        "case_sensitive": False,
        "extra": "ignore",
        "use_enum_values": False
    }

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to a JSON-friendly dictionary."""
        data = self.model_dump()
        return {k: (v.value if isinstance(v, Enum) else v) for k, v in data.items()}

    def validate_for_experiments(self) -> List[str]:
        """
        Flag settings that make experiments diverge from the reference setup.

        Returns:
            List of warnings (empty if all good)
        """
        warnings = []

        if self.alert_threshold == 1:
            warnings.append("Alert threshold 1 alerts on every positive decision")
        if self.chunk_mode == ChunkMode.ALL_AVAILABLE:
            warnings.append("All-available chunking dilutes negative bursts")
        if self.verify_invariants:
            warnings.append("Invariant verification re-extracts features every step")

        return warnings

    def get_scheduler_config(self) -> Dict[str, Any]:
        """Get scheduler parameters."""
        return {
            "confidence_threshold": self.confidence_threshold,
            "batch_size": self.batch_size,
            "chunk_mode": self.chunk_mode,
        }

    def get_cost_model(self) -> Dict[str, Any]:
        """Get virtual-time cost model parameters."""
        return {
            "cost_predictor": self.cost_predictor,
            "cost_fixed_classify": self.cost_fixed_classify,
            "cost_per_comment_feature": self.cost_per_comment_feature,
            "charge_full_recompute": self.charge_full_recompute,
        }

    def get_training_config(self) -> Dict[str, Any]:
        """Get logistic regression training parameters."""
        return {
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "l2": self.l2,
            "seed": self.seed,
        }


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get or create settings instance.

    Returns:
        Settings instance

    Raises:
        ConfigurationError: If settings are invalid
    """
    global _settings

    if _settings is None:
        try:
            _settings = Settings()
        except Exception as e:
            raise ConfigurationError(f"Failed to load settings: {e}")

        for warning in _settings.validate_for_experiments():
            logger.warning(f"Configuration warning: {warning}")

    return _settings


def reload_settings() -> Settings:
    """
    Reload settings from environment.

    Returns:
        New settings instance
    """
    global _settings
    _settings = None
    return get_settings()


def override_settings(**kwargs) -> Settings:
    """
    Override settings with provided values.

    Args:
        **kwargs: Settings to override

    Returns:
        Updated settings instance

    Raises:
        ConfigurationError: If an override is invalid
    """
    global _settings

    try:
        if _settings is None:
            _settings = Settings(**kwargs)
        else:
            current = _settings.model_dump()
            current.update(kwargs)
            _settings = Settings(**current)
    except Exception as e:
        raise ConfigurationError(f"Invalid settings override: {e}")

    return _settings
