"""Interchange formats: collections, queries, qrels, run files, expanded docs.

Everything is UTF-8 with ``\\n`` line endings. Writers produce bit-exact
lines so that rebuilding artifacts is reproducible; every loader is the
inverse of the corresponding writer on the in-memory model.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


class FormatError(ValueError):
    """Malformed interchange file; the message names the path and line."""


@dataclass(frozen=True)
class Document:
    id: str
    text: str


@dataclass(frozen=True)
class Query:
    id: str
    text: str


@dataclass
class Qrels:
    """Graded relevance judgments; absent pairs mean grade 0."""

    by_query: dict[str, dict[str, int]] = field(default_factory=dict)

    def grade(self, query_id: str, doc_id: str) -> int:
        return self.by_query.get(query_id, {}).get(doc_id, 0)

    def grades_for_query(self, query_id: str) -> dict[str, int]:
        return self.by_query.get(query_id, {})

    def num_pairs(self) -> int:
        return sum(len(docs) for docs in self.by_query.values())

    def add(self, query_id: str, doc_id: str, grade: int) -> None:
        if grade < 0:
            raise ValueError(f"relevance grade must be >= 0, got {grade}")
        self.by_query.setdefault(query_id, {})[doc_id] = grade


@dataclass(frozen=True)
class RunEntry:
    query_id: str
    doc_id: str
    rank: int
    score: float
    tag: str


@dataclass(frozen=True)
class ExpandedDocument:
    """A document plus the sentences generated for it at expansion time."""

    id: str
    text: str
    generated: tuple[str, ...]

    def combined_text(self) -> str:
        """Generated sentences prepended to the original text."""
        prefix = " ".join(s for s in self.generated if s)
        return f"{prefix} {self.text}" if prefix else self.text


def _read_id_text_tsv(path: str | Path, kind: str) -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if "\t" not in line:
                raise FormatError(f"{path}:{lineno}: expected id<TAB>text")
            ident, text = line.split("\t", 1)
            if not ident:
                raise FormatError(f"{path}:{lineno}: empty {kind} id")
            if ident in seen:
                raise FormatError(f"{path}:{lineno}: duplicate {kind} id {ident!r}")
            seen.add(ident)
            rows.append((ident, text))
    return rows


def load_collection_tsv(path: str | Path) -> list[Document]:
    """Load ``id<TAB>text`` lines, preserving order; duplicate ids are errors."""
    return [Document(i, t) for i, t in _read_id_text_tsv(path, "document")]


def load_queries_tsv(path: str | Path) -> list[Query]:
    return [Query(i, t) for i, t in _read_id_text_tsv(path, "query")]


def write_collection_tsv(docs: list[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for doc in docs:
            f.write(f"{doc.id}\t{doc.text}\n")


def load_qrels(path: str | Path) -> Qrels:
    """Load whitespace-separated ``qid 0 docid grade`` lines.

    Duplicate (qid, docid) pairs keep the last grade; the dropped count is
    logged as a warning.
    """
    qrels = Qrels()
    duplicates = 0
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise FormatError(f"{path}:{lineno}: expected 4 fields, got {len(parts)}")
            qid, _, docid, grade_str = parts
            try:
                grade = int(grade_str)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-integer grade {grade_str!r}") from None
            if grade < 0:
                raise FormatError(f"{path}:{lineno}: negative grade {grade}")
            if docid in qrels.by_query.get(qid, {}):
                duplicates += 1
            qrels.add(qid, docid, grade)
    if duplicates:
        log.warning("%s: %d duplicate judgment pair(s), kept the last grade", path, duplicates)
    return qrels


def write_qrels(qrels: Qrels, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for qid, docs in qrels.by_query.items():
            for docid, grade in docs.items():
                f.write(f"{qid} 0 {docid} {grade}\n")


def _validate_run(entries: list[RunEntry]) -> None:
    expected_rank: dict[str, int] = {}
    last_score: dict[str, float] = {}
    for entry in entries:
        want = expected_rank.get(entry.query_id, 1)
        if entry.rank != want:
            raise ValueError(
                f"query {entry.query_id!r}: rank {entry.rank} out of sequence (expected {want})"
            )
        expected_rank[entry.query_id] = want + 1
        prev = last_score.get(entry.query_id)
        if prev is not None and entry.score > prev:
            raise ValueError(
                f"query {entry.query_id!r}: score increases at rank {entry.rank}"
            )
        last_score[entry.query_id] = entry.score


def write_run(entries: list[RunEntry], path: str | Path) -> None:
    """Write ``qid Q0 docid rank score tag`` lines, score at 6 decimal places.

    Ranks must be 1..n per query without gaps and scores non-increasing.
    read(write(x)) = x for scores representable at 6 decimal places.
    """
    _validate_run(entries)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for e in entries:
            f.write(f"{e.query_id} Q0 {e.doc_id} {e.rank} {e.score:.6f} {e.tag}\n")


def read_run(path: str | Path) -> list[RunEntry]:
    entries: list[RunEntry] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 6:
                raise FormatError(f"{path}:{lineno}: expected 6 fields, got {len(parts)}")
            qid, _, docid, rank_str, score_str, tag = parts
            try:
                rank = int(rank_str)
                score = float(score_str)
            except ValueError:
                raise FormatError(f"{path}:{lineno}: bad rank/score") from None
            entries.append(RunEntry(qid, docid, rank, score, tag))
    return entries


def write_expanded_jsonl(docs: list[ExpandedDocument], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for doc in docs:
            f.write(expanded_json_line(doc) + "\n")


def expanded_json_line(doc: ExpandedDocument) -> str:
    payload = {"id": doc.id, "contents": doc.text, "generated": list(doc.generated)}
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))


def read_expanded_jsonl(path: str | Path) -> list[ExpandedDocument]:
    docs: list[ExpandedDocument] = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                doc = ExpandedDocument(
                    id=obj["id"],
                    text=obj["contents"],
                    generated=tuple(obj["generated"]),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
            docs.append(doc)
    return docs
