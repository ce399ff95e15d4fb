import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from expandir.analysis import AnalyzerConfig
from expandir.corpus import Document
from expandir.index import build_index

# lowercase-only analysis: hand counts in fixtures stay literal
PLAIN = AnalyzerConfig(lowercase=True, stemming=False, stopwords=False)

FIXTURE_DOCS = [
    Document("d1", "a b"),
    Document("d2", "b c"),
    Document("d3", "c d"),
]


@pytest.fixture
def fixture_index():
    return build_index(FIXTURE_DOCS, PLAIN)
