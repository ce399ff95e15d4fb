"""Deterministic text normalization shared by indexing, querying and scoring.

The token pattern is maximal runs of Unicode alphanumeric characters
(underscore excluded). Stopword removal happens before stemming, on the
lowercased form of the token. With stemming enabled, output tokens are
always lowercase, since the stemmer is defined over lowercase English.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .porter import stem

_TOKEN_RE = re.compile(r"[^\W_]+")
_SENTENCE_RE = re.compile(r"(?<=[.!?])\s+")


def _load_stopwords() -> frozenset[str]:
    text = resources.files(__package__).joinpath("stopwords.txt").read_text("utf-8")
    return frozenset(w for w in text.split() if w)


STOPWORDS = _load_stopwords()


@dataclass(frozen=True)
class AnalyzerConfig:
    """Analysis chain toggles; the same config always yields the same tokens."""

    lowercase: bool = True
    stemming: bool = True
    stopwords: bool = True

    def to_dict(self) -> dict[str, bool]:
        return {
            "lowercase": self.lowercase,
            "stemming": self.stemming,
            "stopwords": self.stopwords,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnalyzerConfig":
        return cls(
            lowercase=bool(data["lowercase"]),
            stemming=bool(data["stemming"]),
            stopwords=bool(data["stopwords"]),
        )


DEFAULT_ANALYZER = AnalyzerConfig()

# lowercase-only chain, used for the lexical-diversity statistic
UNIGRAM_ANALYZER = AnalyzerConfig(lowercase=True, stemming=False, stopwords=False)


def tokenize(text: str, config: AnalyzerConfig = DEFAULT_ANALYZER) -> list[str]:
    """Split text into analyzed tokens according to config."""
    tokens = []
    for raw in _TOKEN_RE.findall(text):
        token = raw.lower() if config.lowercase else raw
        if config.stopwords and token.lower() in STOPWORDS:
            continue
        if config.stemming:
            token = stem(token.lower())
        tokens.append(token)
    return tokens


def split_sentences(text: str) -> list[str]:
    """Split on ., ! or ? followed by whitespace or end of text.

    Pieces are stripped and empty pieces dropped; together with the
    separators the pieces cover the whole input.
    """
    return [p.strip() for p in _SENTENCE_RE.split(text) if p.strip()]
