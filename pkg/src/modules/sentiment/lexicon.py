"""
Lexicon-based sentiment scoring.
Deterministic polarity/subjectivity means and negative-word counts over a word lexicon.
"""

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, List, Tuple

from loguru import logger

from src.core.exceptions import LexiconFormatError, MissingConfigError

_TOKEN_RE = re.compile(r"[^\W_]+")


@dataclass(frozen=True)
class SentimentLexicon:
    """Word → (polarity, subjectivity) entries plus a separate negative-word list."""
    entries: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    negative_words: FrozenSet[str] = frozenset()

    def __post_init__(self):
        for word, (pol, subj) in self.entries.items():
            _check_word(word)
            if not -1.0 <= pol <= 1.0:
                raise ValueError(f"Polarity of {word!r} outside [-1, 1]: {pol}")
            if not 0.0 <= subj <= 1.0:
                raise ValueError(f"Subjectivity of {word!r} outside [0, 1]: {subj}")
        for word in self.negative_words:
            _check_word(word)
        # frozenset for callers passing a plain set
        object.__setattr__(self, "negative_words", frozenset(self.negative_words))


def _check_word(word: str) -> None:
    if not word or word != word.casefold() or any(ch.isspace() for ch in word):
        raise ValueError(f"Lexicon word must be casefolded without whitespace: {word!r}")


def tokenize(text: str) -> List[str]:
    """
    Split on every non-alphanumeric character and apply Unicode case folding.

    "You're SO dumb!!" → ["you", "re", "so", "dumb"]
    """
    return [token.casefold() for token in _TOKEN_RE.findall(text)]


def _mean_column(tokens: List[str], lexicon: SentimentLexicon, column: int) -> float:
    # fsum keeps the mean independent of token order
    entries = lexicon.entries
    values = [entries[token][column] for token in tokens if token in entries]
    return math.fsum(values) / len(values) if values else 0.0


def polarity(text: str, lexicon: SentimentLexicon) -> float:
    """Mean polarity of lexicon tokens; 0.0 when nothing matches."""
    return _mean_column(tokenize(text), lexicon, 0)


def subjectivity(text: str, lexicon: SentimentLexicon) -> float:
    """Mean subjectivity of lexicon tokens; 0.0 when nothing matches."""
    return _mean_column(tokenize(text), lexicon, 1)


def negative_word_count(text: str, lexicon: SentimentLexicon) -> int:
    """Tokens (with multiplicity) that appear in the negative-word list."""
    negative = lexicon.negative_words
    return sum(1 for token in tokenize(text) if token in negative)


def score_comment(text: str, lexicon: SentimentLexicon) -> Tuple[float, float, int]:
    """
    Polarity, subjectivity and negative-word count from a single tokenization.

    Returns:
        (polarity, subjectivity, negative_words)
    """
    entries = lexicon.entries
    negative = lexicon.negative_words
    matched = []
    negatives = 0
    for token in tokenize(text):
        entry = entries.get(token)
        if entry is not None:
            matched.append(entry)
        if token in negative:
            negatives += 1
    if not matched:
        return 0.0, 0.0, negatives
    count = len(matched)
    return (
        math.fsum(pol for pol, _ in matched) / count,
        math.fsum(subj for _, subj in matched) / count,
        negatives,
    )


def _content_lines(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield line_no, line


def load_lexicon(lexicon_path: Path, negative_words_path: Path) -> SentimentLexicon:
    """
    Load a lexicon TSV (`word<TAB>polarity<TAB>subjectivity`) and a negative-word list.

    Raises:
        MissingConfigError: If either file is missing
        LexiconFormatError: On malformed lines or out-of-range values
    """
    lexicon_path = Path(lexicon_path)
    negative_words_path = Path(negative_words_path)
    for path in (lexicon_path, negative_words_path):
        if not path.exists():
            raise MissingConfigError(str(path))

    entries: Dict[str, Tuple[float, float]] = {}
    for line_no, line in _content_lines(lexicon_path):
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconFormatError(str(lexicon_path), line_no, "expected 3 tab-separated fields")
        word = parts[0].strip()
        try:
            pol, subj = float(parts[1]), float(parts[2])
        except ValueError:
            raise LexiconFormatError(str(lexicon_path), line_no, "polarity/subjectivity must be numbers") from None
        if not word or word != word.casefold() or any(ch.isspace() for ch in word):
            raise LexiconFormatError(str(lexicon_path), line_no, f"invalid word {word!r}")
        if not -1.0 <= pol <= 1.0 or not 0.0 <= subj <= 1.0:
            raise LexiconFormatError(str(lexicon_path), line_no, "value out of range")
        entries[word] = (pol, subj)

    negative_words = set()
    for line_no, line in _content_lines(negative_words_path):
        word = line.strip()
        if word != word.casefold() or any(ch.isspace() for ch in word):
            raise LexiconFormatError(str(negative_words_path), line_no, f"invalid word {word!r}")
        negative_words.add(word)

    logger.info(
        f"[LEXICON] Loaded {len(entries)} entries and {len(negative_words)} negative words"
    )
    return SentimentLexicon(entries=entries, negative_words=frozenset(negative_words))
