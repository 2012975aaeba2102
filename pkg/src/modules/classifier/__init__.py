"""
Classifier module.
Logistic regression (standard and incremental inference) and the initial predictor.
"""

from .logistic import (
    LRModel,
    TrainingConfig,
    IncrementalStats,
    EvaluationReport,
    ModelFile,
    sigmoid,
    predict,
    predict_incremental,
    reset_incremental_cache,
    log_loss_and_gradient,
    train,
    evaluate,
    save_model,
    load_model,
)
from .predictor import (
    InitialPrediction,
    predict_initial_priority,
    predict_initial_batch,
    precision_recall_curve,
    tune_predictor,
)

__all__ = [
    'LRModel',
    'TrainingConfig',
    'IncrementalStats',
    'EvaluationReport',
    'ModelFile',
    'sigmoid',
    'predict',
    'predict_incremental',
    'reset_incremental_cache',
    'log_loss_and_gradient',
    'train',
    'evaluate',
    'save_model',
    'load_model',
    'InitialPrediction',
    'predict_initial_priority',
    'predict_initial_batch',
    'precision_recall_curve',
    'tune_predictor',
]
