# src/config.py
"""
Configuration management for session-sentry.
Loads environment variables and provides centralized path and logging config.
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DATA_DIR = Path(__file__).parent / "data"


@dataclass
class PathConfig:
    """Bundled data files and default output locations."""
    lexicon_path: Path = Path(os.getenv("LEXICON_PATH", str(DATA_DIR / "lexicon.tsv")))
    negative_words_path: Path = Path(
        os.getenv("NEGATIVE_WORDS_PATH", str(DATA_DIR / "negative_words.txt"))
    )
    sample_trace_path: Path = Path(
        os.getenv("SAMPLE_TRACE_PATH", str(DATA_DIR / "sample_trace.jsonl"))
    )
    model_dir: Path = Path(os.getenv("MODEL_DIR", "./models"))
    output_dir: Path = Path(os.getenv("OUTPUT_DIR", "./runs"))


@dataclass
class LogConfig:
    """Logging configuration."""
    log_file_path: Path = Path(os.getenv("LOG_FILE_PATH", "./logs/session_sentry.log"))
    log_rotation: str = os.getenv("LOG_ROTATION", "1 day")
    log_retention: str = os.getenv("LOG_RETENTION", "30 days")
    log_format: str = os.getenv("LOG_FORMAT", "text")
    log_to_file: bool = os.getenv("LOG_TO_FILE", "false").lower() == "true"
    log_level: str = os.getenv("LOG_LEVEL", "INFO")


@dataclass
class Config:
    """Main configuration container."""
    paths: PathConfig = field(default_factory=PathConfig)
    log: LogConfig = field(default_factory=LogConfig)


# Global config instance
config = Config()
