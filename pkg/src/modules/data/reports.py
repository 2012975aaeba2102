"""
Report files.
Alerts JSONL, metrics CSV and gain-table CSV.
"""

import json
from pathlib import Path
from typing import Iterable, List, Union

import pandas as pd
from loguru import logger
from pydantic import BaseModel, Field, ValidationError

from src.core.exceptions import MissingConfigError, TraceFormatError
from src.models import AlertRecord

METRICS_COLUMNS = [
    "policy",
    "classifier_mode",
    "confidence_threshold",
    "batch_size",
    "sessions",
    "alerts",
    "precision",
    "recall",
    "mean_gain",
    "total_ticks",
]
GAIN_COLUMNS = ["confidence_threshold", "batch_size", "mean_gain", "sessions_compared"]


class AlertLine(BaseModel):
    """One alerts JSONL record."""
    session_id: str = Field(min_length=1)
    raised_at: int = Field(ge=0)
    positives_since_last: int = Field(ge=1)
    confidence: float = Field(ge=0.0, le=1.0)


class AlertWriter:
    """Alert sink that appends one JSON line per alert."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, "w", encoding="utf-8", newline="\n")
        self.count = 0

    def __call__(self, alert: AlertRecord) -> None:
        self._file.write(json.dumps(alert.to_dict()) + "\n")
        self.count += 1

    def close(self) -> None:
        if not self._file.closed:
            self._file.close()
            logger.info(f"[REPORT] Wrote {self.count} alerts to {self.path}")

    def __enter__(self) -> "AlertWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_alerts(path: Path, alerts: Iterable[AlertRecord]) -> int:
    """Write alerts as JSONL. Returns the number written."""
    with AlertWriter(path) as writer:
        for alert in alerts:
            writer(alert)
        return writer.count


def read_alerts(path: Path) -> List[AlertLine]:
    """
    Read and validate an alerts file.

    Raises:
        MissingConfigError: If the file does not exist
        TraceFormatError: On malformed lines
    """
    path = Path(path)
    if not path.exists():
        raise MissingConfigError(str(path))
    alerts = []
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            if not raw.strip():
                continue
            try:
                alerts.append(AlertLine.model_validate_json(raw))
            except ValidationError as e:
                raise TraceFormatError(str(path), line_no, e.errors()[0]["msg"]) from None
    return alerts


def _write_frame(path: Path, frame: pd.DataFrame, columns: List[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.reindex(columns=columns).to_csv(path, index=False, lineterminator="\n")
    logger.info(f"[REPORT] Wrote {len(frame)} rows to {path}")
    return path


def write_metrics(path: Path, metrics: Union[pd.DataFrame, Iterable]) -> Path:
    """Write metrics rows (DataFrame or RunMetrics objects) with the fixed header."""
    if not isinstance(metrics, pd.DataFrame):
        metrics = pd.DataFrame([row.to_row() for row in metrics], columns=METRICS_COLUMNS)
    return _write_frame(path, metrics, METRICS_COLUMNS)


def write_gain_table(path: Path, table: pd.DataFrame) -> Path:
    """Write a threshold × batch-size gain table."""
    return _write_frame(path, table, GAIN_COLUMNS)


def read_table(path: Path) -> pd.DataFrame:
    """Read a metrics or gain CSV."""
    path = Path(path)
    if not path.exists():
        raise MissingConfigError(str(path))
    return pd.read_csv(path)
