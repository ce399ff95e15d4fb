"""Immutable inverted index with the collection statistics the scorers need.

Snapshot layout (little-endian, version 1):

    magic  b"XPIX"
    u32    format version
    u32    header length, then that many bytes of JSON:
           {"analyzer": {...}, "doc_count": N, "total_tokens": T}
    doc table, N records: u32 id length, id bytes (UTF-8), u32 token count
    u32    term count, then per term (terms in lexicographic byte order):
           u32 term length, term bytes, u32 postings count,
           postings as pairs (u32 doc ordinal, u32 term frequency)

Collection term counts and avgdl are derived on load.
"""

from __future__ import annotations

import io
import json
import struct
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import AnalyzerConfig, tokenize
from .corpus import Document

_MAGIC = b"XPIX"
_VERSION = 1


@dataclass
class InvertedIndex:
    doc_ids: list[str]
    doc_lengths: np.ndarray  # int64, token count per doc ordinal
    postings: dict[str, tuple[np.ndarray, np.ndarray]]  # term -> (ordinals, tfs)
    collection_term_counts: dict[str, int]
    total_tokens: int
    analyzer: AnalyzerConfig
    _ordinals: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self._ordinals = {doc_id: i for i, doc_id in enumerate(self.doc_ids)}

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    @property
    def avgdl(self) -> float:
        return self.total_tokens / self.doc_count

    def ordinal(self, doc_id: str) -> int:
        try:
            return self._ordinals[doc_id]
        except KeyError:
            raise KeyError(f"unknown doc id {doc_id!r}") from None

    def doc_length(self, doc_id: str) -> int:
        return int(self.doc_lengths[self.ordinal(doc_id)])

    def doc_frequency(self, term: str) -> int:
        entry = self.postings.get(term)
        return 0 if entry is None else len(entry[0])

    def term_frequency(self, term: str, doc_id: str) -> int:
        ordinal = self.ordinal(doc_id)
        entry = self.postings.get(term)
        if entry is None:
            return 0
        ordinals, tfs = entry
        pos = np.searchsorted(ordinals, ordinal)
        if pos < len(ordinals) and ordinals[pos] == ordinal:
            return int(tfs[pos])
        return 0

    def collection_prob(self, term: str) -> float:
        count = self.collection_term_counts.get(term, 0)
        return count / self.total_tokens if self.total_tokens else 0.0

    def save(self, path: str | Path) -> None:
        with open(path, "wb") as f:
            f.write(self.to_bytes())

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        header = json.dumps(
            {
                "analyzer": self.analyzer.to_dict(),
                "doc_count": self.doc_count,
                "total_tokens": self.total_tokens,
            },
            sort_keys=True,
            separators=(",", ":"),
        ).encode("utf-8")
        buf.write(_MAGIC)
        buf.write(struct.pack("<I", _VERSION))
        buf.write(struct.pack("<I", len(header)))
        buf.write(header)
        for doc_id, length in zip(self.doc_ids, self.doc_lengths):
            raw = doc_id.encode("utf-8")
            buf.write(struct.pack("<I", len(raw)))
            buf.write(raw)
            buf.write(struct.pack("<I", int(length)))
        terms = sorted(self.postings)
        buf.write(struct.pack("<I", len(terms)))
        for term in terms:
            raw = term.encode("utf-8")
            ordinals, tfs = self.postings[term]
            buf.write(struct.pack("<I", len(raw)))
            buf.write(raw)
            buf.write(struct.pack("<I", len(ordinals)))
            pairs = np.empty(2 * len(ordinals), dtype="<u4")
            pairs[0::2] = ordinals
            pairs[1::2] = tfs
            buf.write(pairs.tobytes())
        return buf.getvalue()

    @classmethod
    def load(cls, path: str | Path) -> "InvertedIndex":
        with open(path, "rb") as f:
            return cls.from_bytes(f.read())

    @classmethod
    def from_bytes(cls, data: bytes) -> "InvertedIndex":
        view = memoryview(data)
        if bytes(view[:4]) != _MAGIC:
            raise ValueError("not an index snapshot (bad magic)")
        (version,) = struct.unpack_from("<I", view, 4)
        if version != _VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        (header_len,) = struct.unpack_from("<I", view, 8)
        offset = 12
        header = json.loads(bytes(view[offset : offset + header_len]))
        offset += header_len
        doc_count = header["doc_count"]
        doc_ids: list[str] = []
        doc_lengths = np.empty(doc_count, dtype=np.int64)
        for i in range(doc_count):
            (id_len,) = struct.unpack_from("<I", view, offset)
            offset += 4
            doc_ids.append(bytes(view[offset : offset + id_len]).decode("utf-8"))
            offset += id_len
            (doc_lengths[i],) = struct.unpack_from("<I", view, offset)
            offset += 4
        (term_count,) = struct.unpack_from("<I", view, offset)
        offset += 4
        postings: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        counts: dict[str, int] = {}
        for _ in range(term_count):
            (term_len,) = struct.unpack_from("<I", view, offset)
            offset += 4
            term = bytes(view[offset : offset + term_len]).decode("utf-8")
            offset += term_len
            (df,) = struct.unpack_from("<I", view, offset)
            offset += 4
            pairs = np.frombuffer(view, dtype="<u4", count=2 * df, offset=offset)
            offset += 8 * df
            ordinals = pairs[0::2].astype(np.int64)
            tfs = pairs[1::2].astype(np.int64)
            postings[term] = (ordinals, tfs)
            counts[term] = int(tfs.sum())
        return cls(
            doc_ids=doc_ids,
            doc_lengths=doc_lengths,
            postings=postings,
            collection_term_counts=counts,
            total_tokens=header["total_tokens"],
            analyzer=AnalyzerConfig.from_dict(header["analyzer"]),
        )


def build_index(collection: list[Document], analyzer: AnalyzerConfig) -> InvertedIndex:
    """Build an index over the collection; doc ordinals follow input order."""
    if not collection:
        raise ValueError("cannot index an empty collection")
    seen: set[str] = set()
    doc_ids: list[str] = []
    doc_lengths = np.zeros(len(collection), dtype=np.int64)
    raw_postings: dict[str, list[tuple[int, int]]] = {}
    counts: dict[str, int] = {}
    total = 0
    for ordinal, doc in enumerate(collection):
        if doc.id in seen:
            raise ValueError(f"duplicate doc id {doc.id!r}")
        seen.add(doc.id)
        doc_ids.append(doc.id)
        tokens = tokenize(doc.text, analyzer)
        doc_lengths[ordinal] = len(tokens)
        total += len(tokens)
        for term, tf in Counter(tokens).items():
            raw_postings.setdefault(term, []).append((ordinal, tf))
            counts[term] = counts.get(term, 0) + tf
    postings = {
        term: (
            np.array([o for o, _ in pairs], dtype=np.int64),
            np.array([tf for _, tf in pairs], dtype=np.int64),
        )
        for term, pairs in raw_postings.items()
    }
    return InvertedIndex(
        doc_ids=doc_ids,
        doc_lengths=doc_lengths,
        postings=postings,
        collection_term_counts=counts,
        total_tokens=total,
        analyzer=analyzer,
    )
