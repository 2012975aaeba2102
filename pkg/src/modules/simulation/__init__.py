"""
Simulation module.
Workload generation, the virtual-time detection engine, metrics and experiments.
"""

from .cost_model import CostModel, VirtualClock
from .workload import WorkloadConfig, generate_workload
from .engine import DetectionEngine, InvocationRecord, RunResult, run
from .metrics import (
    METRICS_COLUMNS,
    AlertScore,
    GainReport,
    RunMetrics,
    score_alerts,
    responsiveness_gain,
    summarize_run,
    metrics_frame,
    invocation_frame,
)
from .experiments import (
    GAIN_COLUMNS,
    TrainedModels,
    RunSpec,
    BenchmarkReport,
    run_spec,
    split_sessions,
    predictor_dataset,
    classifier_dataset,
    full_session_dataset,
    train_models,
    end_of_session_baseline,
    compare_policies,
    gain_by_session_count,
    compare_chunk_modes,
    sweep_alert_thresholds,
    sweep_thresholds,
    benchmark_classifier_modes,
)

__all__ = [
    'CostModel',
    'VirtualClock',
    'WorkloadConfig',
    'generate_workload',
    'DetectionEngine',
    'InvocationRecord',
    'RunResult',
    'run',
    'METRICS_COLUMNS',
    'AlertScore',
    'GainReport',
    'RunMetrics',
    'score_alerts',
    'responsiveness_gain',
    'summarize_run',
    'metrics_frame',
    'invocation_frame',
    'GAIN_COLUMNS',
    'TrainedModels',
    'RunSpec',
    'BenchmarkReport',
    'run_spec',
    'split_sessions',
    'predictor_dataset',
    'classifier_dataset',
    'full_session_dataset',
    'train_models',
    'end_of_session_baseline',
    'compare_policies',
    'gain_by_session_count',
    'compare_chunk_modes',
    'sweep_alert_thresholds',
    'sweep_thresholds',
    'benchmark_classifier_modes',
]
