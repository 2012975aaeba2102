"""
Features module.
Predictor and main-classifier feature vectors, batch and incremental.
"""

from .extraction import (
    SENTIMENT_QUANTUM,
    FeatureSchema,
    AdditiveDelta,
    ZERO_DELTA,
    quantize,
    comment_contribution,
    extract_predictor_features,
    extract_batch,
    extract_delta,
    prime_features,
    fold_delta,
    extract_prefix_examples,
)

__all__ = [
    'SENTIMENT_QUANTUM',
    'FeatureSchema',
    'AdditiveDelta',
    'ZERO_DELTA',
    'quantize',
    'comment_contribution',
    'extract_predictor_features',
    'extract_batch',
    'extract_delta',
    'prime_features',
    'fold_delta',
    'extract_prefix_examples',
]
