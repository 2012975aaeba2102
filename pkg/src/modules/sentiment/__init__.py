"""
Sentiment module.
Lexicon-based polarity, subjectivity and negative-word scoring.
"""

from .lexicon import (
    SentimentLexicon,
    tokenize,
    polarity,
    subjectivity,
    negative_word_count,
    score_comment,
    load_lexicon,
)

__all__ = [
    'SentimentLexicon',
    'tokenize',
    'polarity',
    'subjectivity',
    'negative_word_count',
    'score_comment',
    'load_lexicon',
]
