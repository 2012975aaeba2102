"""
Tests for lexicon loading and sentiment scoring.
"""

import itertools

import numpy as np
import pytest

from src.core.exceptions import LexiconFormatError, MissingConfigError
from src.modules.sentiment import (
    SentimentLexicon,
    load_lexicon,
    negative_word_count,
    polarity,
    score_comment,
    subjectivity,
    tokenize,
)


class TestTokenize:
    """Tokenization rules."""

    def test_splits_on_non_alphanumerics(self):
        """Punctuation and apostrophes split tokens; output is case-folded."""
        assert tokenize("You're SO dumb!!") == ["you", "re", "so", "dumb"]

    def test_underscores_and_digits(self):
        """Underscores separate, digits stay."""
        assert tokenize("no_way 2day") == ["no", "way", "2day"]

    def test_empty(self):
        """Empty and punctuation-only text has no tokens."""
        assert tokenize("") == []
        assert tokenize("?!...") == []

    def test_unicode_case_folding(self):
        """Full case folding, not just lowercasing: ß and SS fold alike."""
        assert tokenize("STRASSE Straße") == ["strasse", "strasse"]
        folded = SentimentLexicon(entries={"strasse": (0.5, 0.5)})
        assert polarity("STRAẞE", folded) == 0.5


class TestScoring:
    """Polarity, subjectivity and negative words."""

    def test_mean_over_matched_tokens(self, lexicon):
        """Unmatched tokens do not dilute the mean."""
        assert polarity("love this great video", lexicon) == 0.625
        assert subjectivity("love this great video", lexicon) == 0.625

    def test_no_match_is_zero(self, lexicon):
        """Text with no lexicon tokens scores 0."""
        assert polarity("hello there", lexicon) == 0.0
        assert subjectivity("", lexicon) == 0.0

    def test_case_insensitive(self, lexicon):
        """Lookup is case-insensitive."""
        assert polarity("STUPID", lexicon) == -0.75

    def test_negative_words_with_multiplicity(self, lexicon):
        """Every occurrence counts, including words absent from the sentiment entries."""
        assert negative_word_count("stupid stupid loser", lexicon) == 3
        assert negative_word_count("great", lexicon) == 0

    def test_score_comment_matches_parts(self, lexicon):
        """The single-pass scorer agrees with the separate functions."""
        text = "You ugly idiot, really bad"
        pol, subj, negatives = score_comment(text, lexicon)
        assert pol == polarity(text, lexicon)
        assert subj == subjectivity(text, lexicon)
        assert negatives == negative_word_count(text, lexicon) == 2

    def test_lexicon_validation(self):
        """Entries must be case-folded and in range."""
        with pytest.raises(ValueError):
            SentimentLexicon(entries={"Bad": (-0.5, 0.5)})
        with pytest.raises(ValueError):
            SentimentLexicon(entries={"bad": (-1.5, 0.5)})
        with pytest.raises(ValueError):
            SentimentLexicon(entries={"bad": (-0.5, 1.5)})
        with pytest.raises(ValueError):
            SentimentLexicon(entries={"straße": (0.5, 0.5)})


class TestScoringProperties:
    """Order, range and unknown-token behaviour of the means."""

    THIRDS = SentimentLexicon(entries={"x": (0.1, 0.1), "y": (0.2, 0.2), "z": (0.3, 0.3)})

    def test_token_order_does_not_matter(self):
        """Every permutation of the same tokens scores bit-identically."""
        scores = {
            score_comment(" ".join(order), self.THIRDS)
            for order in itertools.permutations(["x", "y", "z", "x"])
        }
        assert len(scores) == 1
        assert polarity("x y z", self.THIRDS) == polarity("z y x", self.THIRDS)

    def test_random_texts_stay_in_range(self, bundled_lexicon):
        """Polarity stays in [-1, 1] and subjectivity in [0, 1]; shuffling never changes them."""
        rng = np.random.default_rng(4)
        vocabulary = sorted(bundled_lexicon.entries) + ["unknown", "words"]
        for _ in range(500):
            tokens = list(rng.choice(vocabulary, size=int(rng.integers(1, 30))))
            pol, subj, _ = score_comment(" ".join(tokens), bundled_lexicon)
            assert -1.0 <= pol <= 1.0
            assert 0.0 <= subj <= 1.0
            rng.shuffle(tokens)
            assert score_comment(" ".join(tokens), bundled_lexicon)[:2] == (pol, subj)

    def test_unknown_token_changes_nothing(self, lexicon):
        """Appending a token outside the lexicon leaves polarity and subjectivity alone."""
        text = "love ugly really"
        assert polarity(text + " zzz", lexicon) == polarity(text, lexicon)
        assert subjectivity(text + " zzz", lexicon) == subjectivity(text, lexicon)


class TestLoadLexicon:
    """Lexicon and negative-word files."""

    def test_load(self, tmp_path):
        """Comments and blank lines are skipped."""
        lex = tmp_path / "lex.tsv"
        lex.write_text("# header\nlove\t0.5\t0.6\n\nhate\t-0.8\t0.9\n")
        neg = tmp_path / "neg.txt"
        neg.write_text("hate\n# comment\nloser\n")

        lexicon = load_lexicon(lex, neg)
        assert lexicon.entries == {"love": (0.5, 0.6), "hate": (-0.8, 0.9)}
        assert lexicon.negative_words == frozenset({"hate", "loser"})

    def test_missing_file(self, tmp_path):
        """A missing file names its path."""
        neg = tmp_path / "neg.txt"
        neg.write_text("hate\n")
        with pytest.raises(MissingConfigError, match="nope.tsv"):
            load_lexicon(tmp_path / "nope.tsv", neg)

    @pytest.mark.parametrize("line", [
        "love\t0.5",
        "love\tx\t0.5",
        "Love\t0.5\t0.5",
        "love\t2.0\t0.5",
        "love\t0.5\t-0.1",
    ])
    def test_malformed_lines(self, tmp_path, line):
        """Bad lines report their line number."""
        lex = tmp_path / "lex.tsv"
        lex.write_text("good\t0.7\t0.6\n" + line + "\n")
        neg = tmp_path / "neg.txt"
        neg.write_text("")
        with pytest.raises(LexiconFormatError) as exc:
            load_lexicon(lex, neg)
        assert exc.value.details["line"] == 2

    def test_bundled_lexicon(self, bundled_lexicon):
        """The shipped lexicon covers the negative-word list."""
        assert len(bundled_lexicon.entries) > 100
        assert "idiot" in bundled_lexicon.negative_words
        assert bundled_lexicon.entries["idiot"][0] < 0
        assert bundled_lexicon.entries["love"][0] > 0
