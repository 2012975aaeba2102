"""
Shared fixtures for session-sentry tests.
"""

import pytest

from src.config import config
from src.core import settings as settings_module
from src.models import Comment, MediaSession, UserProfile
from src.modules.sentiment import SentimentLexicon, load_lexicon


@pytest.fixture
def lexicon():
    """Small in-memory lexicon with exactly representable values."""
    return SentimentLexicon(
        entries={
            "love": (0.5, 0.5),
            "great": (0.75, 0.75),
            "stupid": (-0.75, 1.0),
            "ugly": (-0.5, 1.0),
            "idiot": (-1.0, 1.0),
            "bad": (-0.5, 0.5),
            "really": (0.25, 0.25),
        },
        negative_words=frozenset({"stupid", "ugly", "idiot", "loser"}),
    )


@pytest.fixture(scope="session")
def bundled_lexicon():
    """Lexicon shipped under src/data."""
    return load_lexicon(config.paths.lexicon_path, config.paths.negative_words_path)


@pytest.fixture
def make_session():
    """Factory for sessions with comments one tick apart starting after creation."""
    def _make(session_id="s1", texts=(), followers=100, followings=50, posts=10,
              caption="", created_at=0, label=None):
        comments = [Comment(arrival_time=created_at + i + 1, text=t) for i, t in enumerate(texts)]
        return MediaSession(
            session_id=session_id,
            poster=UserProfile(follower_count=followers, following_count=followings, post_count=posts),
            caption=caption,
            created_at=created_at,
            comments=comments,
            ground_truth_label=label,
        )
    return _make


@pytest.fixture(autouse=True)
def reset_global_settings():
    """Keep override_settings() from leaking between tests."""
    settings_module._settings = None
    yield
    settings_module._settings = None
