"""Document expansion: generate sentences per document and prepend them.

Three generator kinds share one interface (document in, sentence list out):

* ``lexrank``            -- extractive; top sentences of the document itself,
                            ranked by PageRank over a sentence-similarity graph.
* ``mock-synonym``       -- deterministic test double; rewrites document
                            tokens through a synonym table.
* ``remote-abstractive`` -- HTTP client for a generation service producing
                            novel sentences (beam / mc-dropout / top-k).

Expansion happens strictly at indexing time; there is no query-time path.
Generated sentences are kept verbatim, duplicates included: repeats
re-weight the terms they copy.
"""

from __future__ import annotations

import hashlib
import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np
import requests

from .analysis import AnalyzerConfig, split_sentences, tokenize
from .corpus import Document, ExpandedDocument, expanded_json_line

log = logging.getLogger(__name__)

GENERATOR_KINDS = ("lexrank", "mock-synonym", "remote-abstractive")
STRATEGIES = ("beam", "mc-dropout", "top-k")

LEXRANK_SIMILARITY_THRESHOLD = 0.1
LEXRANK_DAMPING = 0.85
LEXRANK_TOLERANCE = 1e-8
LEXRANK_MAX_ITERATIONS = 100


class GenerationError(RuntimeError):
    """A generator failed for one document."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Configuration for a generator.

    ``num_sequences`` drives the stochastic generators (how many sequences
    to sample per document). The deterministic lexrank kind ignores it and
    emits its ``sentences_per_sequence`` top-ranked sentences instead.
    """

    kind: str
    num_sequences: int = 4
    strategy: str = "mc-dropout"
    beam_size: int = 8
    top_k: int = 50
    seed: int | None = None
    sentences_per_sequence: int = 1

    def __post_init__(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.num_sequences < 1:
            raise ValueError(f"num_sequences must be >= 1, got {self.num_sequences}")
        if self.beam_size < 1:
            raise ValueError(f"beam_size must be >= 1, got {self.beam_size}")
        if self.top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {self.top_k}")
        if self.sentences_per_sequence < 1:
            raise ValueError(
                f"sentences_per_sequence must be >= 1, got {self.sentences_per_sequence}"
            )


@dataclass(frozen=True)
class ExpansionResult:
    """One expanded document, with term accounting over the generated text."""

    doc_id: str
    sequences: tuple[str, ...]
    expanded_text: str
    token_count: int  # generated tokens, total occurrences
    novel_token_count: int  # generated tokens absent from the source doc

    @property
    def novelty_ratio(self) -> float:
        return self.novel_token_count / self.token_count if self.token_count else 0.0


Generator = Callable[[Document], list[str]]


def rank_sentences(text: str, analyzer: AnalyzerConfig) -> list[tuple[str, float]]:
    """Sentences of the text with their PageRank centrality, in text order.

    Sentences become TF-IDF vectors over the document's own sentence set
    (idf = ln(1 + M/df)); cosine similarities >= 0.1 between distinct
    sentences yield (unweighted) edges; PageRank runs with damping 0.85 and
    uniform teleport until the L1 change drops below 1e-8 or 100 iterations.
    Scores sum to 1.
    """
    sentences = split_sentences(text)
    m = len(sentences)
    if m == 0:
        return []
    if m == 1:
        return [(sentences[0], 1.0)]

    token_lists = [tokenize(s, analyzer) for s in sentences]
    vocab = sorted({t for tokens in token_lists for t in tokens})
    term_pos = {t: i for i, t in enumerate(vocab)}
    tf = np.zeros((m, len(vocab)))
    for row, tokens in enumerate(token_lists):
        for t in tokens:
            tf[row, term_pos[t]] += 1.0
    df = np.count_nonzero(tf, axis=0)
    idf = np.log(1.0 + m / np.maximum(df, 1))
    vectors = tf * idf

    norms = np.linalg.norm(vectors, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    unit = vectors / safe[:, None]
    similarity = unit @ unit.T
    adjacency = (similarity >= LEXRANK_SIMILARITY_THRESHOLD).astype(float)
    np.fill_diagonal(adjacency, 0.0)

    degrees = adjacency.sum(axis=1)
    transition = np.full((m, m), 1.0 / m)
    linked = degrees > 0
    transition[linked] = adjacency[linked] / degrees[linked, None]

    scores = np.full(m, 1.0 / m)
    teleport = (1.0 - LEXRANK_DAMPING) / m
    for _ in range(LEXRANK_MAX_ITERATIONS):
        updated = teleport + LEXRANK_DAMPING * (transition.T @ scores)
        if np.abs(updated - scores).sum() < LEXRANK_TOLERANCE:
            scores = updated
            break
        scores = updated
    return list(zip(sentences, scores.tolist()))


def lexrank_extract(
    doc: Document,
    sentences_per_sequence: int = 1,
    analyzer: AnalyzerConfig = AnalyzerConfig(),
) -> list[str]:
    """Top sentences of the document by centrality, ties to earlier position."""
    ranked = rank_sentences(doc.text, analyzer)
    order = sorted(range(len(ranked)), key=lambda i: (-ranked[i][1], i))
    return [ranked[i][0] for i in order[:sentences_per_sequence]]


def derive_seed(seed: int | None, doc_id: str, salt: str = "") -> int:
    """Stable per-document seed, independent of processing order."""
    material = f"{seed}:{doc_id}:{salt}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(material).digest()[:8], "big")


def load_synonym_table(path: str | Path) -> dict[str, list[str]]:
    """Read a ``token<TAB>syn1,syn2`` table."""
    table: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line:
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected token<TAB>synonyms")
            token, syns = line.split("\t", 1)
            table[token] = [s for s in syns.split(",") if s]
    return table


_PLAIN = AnalyzerConfig(lowercase=True, stemming=False, stopwords=False)


def mock_synonym_generate(
    doc: Document,
    table: dict[str, list[str]],
    num_sequences: int = 4,
    seed: int | None = None,
) -> list[str]:
    """S sentences rewriting the document's mapped tokens through the table.

    Each sequence walks the document tokens in order and, for every token
    with a table entry, emits one synonym picked by a per-(seed, doc) RNG.
    Fully deterministic given the seed.
    """
    tokens = tokenize(doc.text, _PLAIN)
    rng = random.Random(derive_seed(seed, doc.id, "mock"))
    sentences = []
    for _ in range(num_sequences):
        words = [rng.choice(table[t]) for t in tokens if t in table and table[t]]
        sentences.append(" ".join(words))
    return sentences


class GenerationClient:
    """HTTP client for the remote generation service.

    Transport failures, overload (429) and server errors (5xx) are retried
    with exponential backoff up to ``max_retries``; anything still failing
    raises GenerationError.
    """

    def __init__(
        self,
        endpoint: str,
        timeout: float = 30.0,
        max_retries: int = 3,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ) -> None:
        self.endpoint = endpoint.rstrip("/")
        self.timeout = timeout
        self.max_retries = max_retries
        self.backoff = backoff
        self.session = session or requests.Session()

    def generate(self, text: str, spec: GeneratorSpec, seed: int | None = None) -> list[str]:
        payload = {
            "text": text,
            "strategy": spec.strategy,
            "num_samples": spec.num_sequences,
            "beam_size": spec.beam_size,
            "top_k": spec.top_k,
        }
        if seed is not None:
            payload["seed"] = seed
        last_error: Exception | None = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                time.sleep(self.backoff * 2 ** (attempt - 1))
            try:
                response = self.session.post(
                    f"{self.endpoint}/generate", json=payload, timeout=self.timeout
                )
            except requests.RequestException as exc:
                last_error = exc
                continue
            if response.status_code == 200:
                sentences = response.json()["sentences"]
                if len(sentences) != spec.num_sequences:
                    raise GenerationError(
                        f"service returned {len(sentences)} sentences, "
                        f"expected {spec.num_sequences}"
                    )
                return list(sentences)
            if response.status_code == 429 or response.status_code >= 500:
                last_error = GenerationError(
                    f"service error {response.status_code}: {response.text[:200]}"
                )
                continue
            raise GenerationError(
                f"service rejected request ({response.status_code}): {response.text[:200]}"
            )
        raise GenerationError(f"generation failed after {self.max_retries + 1} attempts: {last_error}")


def remote_generate(client: GenerationClient, doc: Document, spec: GeneratorSpec) -> list[str]:
    """One request for S sequences; per-doc seed derived when a seed is set."""
    seed = derive_seed(spec.seed, doc.id, "remote") if spec.seed is not None else None
    return client.generate(doc.text, spec, seed=seed)


def make_generator(
    spec: GeneratorSpec,
    analyzer: AnalyzerConfig = AnalyzerConfig(),
    synonym_table: dict[str, list[str]] | None = None,
    client: GenerationClient | None = None,
) -> Generator:
    """Bind a GeneratorSpec to a document->sentences callable."""
    if spec.kind == "lexrank":
        return lambda doc: lexrank_extract(doc, spec.sentences_per_sequence, analyzer)
    if spec.kind == "mock-synonym":
        if synonym_table is None:
            raise ValueError("mock-synonym generator needs a synonym table")
        return lambda doc: mock_synonym_generate(
            doc, synonym_table, spec.num_sequences, spec.seed
        )
    if spec.kind == "remote-abstractive":
        if client is None:
            raise ValueError("remote-abstractive generator needs a client")
        return lambda doc: remote_generate(client, doc, spec)
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def expand_document(
    doc: Document,
    generator: Generator,
    analyzer: AnalyzerConfig = AnalyzerConfig(),
) -> ExpansionResult:
    """Run the generator and assemble the expanded text, generated-first."""
    try:
        sequences = tuple(generator(doc))
    except GenerationError as exc:
        raise GenerationError(f"doc {doc.id!r}: {exc}") from exc
    expanded = ExpandedDocument(doc.id, doc.text, sequences)
    doc_tokens = set(tokenize(doc.text, analyzer))
    generated_tokens = [t for s in sequences for t in tokenize(s, analyzer)]
    novel = sum(1 for t in generated_tokens if t not in doc_tokens)
    return ExpansionResult(
        doc_id=doc.id,
        sequences=sequences,
        expanded_text=expanded.combined_text(),
        token_count=len(generated_tokens),
        novel_token_count=novel,
    )


@dataclass
class ExpansionSummary:
    docs_processed: int = 0
    failed_doc_ids: list[str] = field(default_factory=list)
    mean_token_count: float = 0.0
    mean_novel_count: float = 0.0
    mean_novelty_ratio: float = 0.0

    @property
    def failures(self) -> int:
        return len(self.failed_doc_ids)


def expand_collection(
    collection: Iterable[Document],
    generator: Generator,
    analyzer: AnalyzerConfig,
    output_path: str | Path,
    parallelism: int = 1,
) -> ExpansionSummary:
    """Expand every document and stream the expanded JSONL to output_path.

    Output order always follows input order, whatever the parallelism. A
    failing document is written with zero generated sentences and recorded
    in the summary; the run continues.
    """
    summary = ExpansionSummary()
    token_counts: list[int] = []
    novel_counts: list[int] = []
    ratios: list[float] = []

    def expand_one(doc: Document) -> tuple[Document, ExpansionResult | None, str | None]:
        try:
            return doc, expand_document(doc, generator, analyzer), None
        except GenerationError as exc:
            return doc, None, str(exc)

    with open(output_path, "w", encoding="utf-8", newline="\n") as out:
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
            for doc, result, error in pool.map(expand_one, collection):
                summary.docs_processed += 1
                if result is None:
                    log.error("expansion failed: %s", error)
                    summary.failed_doc_ids.append(doc.id)
                    expanded = ExpandedDocument(doc.id, doc.text, ())
                else:
                    token_counts.append(result.token_count)
                    novel_counts.append(result.novel_token_count)
                    if result.token_count:
                        ratios.append(result.novelty_ratio)
                    expanded = ExpandedDocument(doc.id, doc.text, result.sequences)
                out.write(expanded_json_line(expanded) + "\n")

    if token_counts:
        summary.mean_token_count = sum(token_counts) / len(token_counts)
        summary.mean_novel_count = sum(novel_counts) / len(novel_counts)
    if ratios:
        summary.mean_novelty_ratio = sum(ratios) / len(ratios)
    return summary
