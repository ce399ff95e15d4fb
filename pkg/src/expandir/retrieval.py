"""Scoring and top-k search: BM25, Dirichlet query likelihood, RM3 feedback.

Candidate generation is restricted to documents sharing at least one query
term, for both scorers; documents with no overlap are never ranked.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .analysis import tokenize
from .corpus import Query
from .index import InvertedIndex

# score contribution of a query term absent from the whole collection
ZERO_PROB_FLOOR = 1e-12


@dataclass(frozen=True)
class BM25Params:
    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self) -> None:
        if self.k1 < 0:
            raise ValueError(f"k1 must be >= 0, got {self.k1}")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError(f"b must be in [0, 1], got {self.b}")


@dataclass(frozen=True)
class QLParams:
    mu: float = 1000.0

    def __post_init__(self) -> None:
        if self.mu <= 0:
            raise ValueError(f"mu must be > 0, got {self.mu}")


@dataclass(frozen=True)
class RM3Params:
    fb_docs: int = 10
    fb_terms: int = 10
    original_weight: float = 0.5

    def __post_init__(self) -> None:
        if self.fb_docs < 0:
            raise ValueError(f"fb_docs must be >= 0, got {self.fb_docs}")
        if self.fb_terms < 1:
            raise ValueError(f"fb_terms must be >= 1, got {self.fb_terms}")
        if not 0.0 <= self.original_weight <= 1.0:
            raise ValueError(f"original_weight must be in [0, 1], got {self.original_weight}")


@dataclass
class RankedList:
    """Retrieval output: (doc id, score) pairs, score descending, ties by id."""

    query_id: str
    entries: list[tuple[str, float]]

    def doc_ids(self) -> list[str]:
        return [doc_id for doc_id, _ in self.entries]


def _idf(index: InvertedIndex, term: str) -> float:
    df = index.doc_frequency(term)
    return math.log(1.0 + (index.doc_count - df + 0.5) / (df + 0.5))


def bm25_score(
    index: InvertedIndex,
    query_tokens: list[str],
    doc_id: str,
    params: BM25Params = BM25Params(),
) -> float:
    """Sum over query token occurrences of idf * saturated tf."""
    dl = index.doc_length(doc_id)
    norm = params.k1 * (1.0 - params.b + params.b * dl / index.avgdl)
    score = 0.0
    for token in query_tokens:
        tf = index.term_frequency(token, doc_id)
        if tf == 0:
            continue
        score += _idf(index, token) * tf * (params.k1 + 1.0) / (tf + norm)
    return score


def ql_score(
    index: InvertedIndex,
    query_tokens: list[str],
    doc_id: str,
    params: QLParams = QLParams(),
) -> float:
    """Dirichlet-smoothed log likelihood of the query under the doc model."""
    dl = index.doc_length(doc_id)
    score = 0.0
    for token in query_tokens:
        p_coll = index.collection_prob(token)
        if p_coll == 0.0:
            score += math.log(ZERO_PROB_FLOOR)
            continue
        tf = index.term_frequency(token, doc_id)
        score += math.log((tf + params.mu * p_coll) / (dl + params.mu))
    return score


def _merge_weights(weighted_terms: list[tuple[str, float]]) -> dict[str, float]:
    merged: dict[str, float] = {}
    for term, weight in weighted_terms:
        if weight <= 0.0:
            continue
        merged[term] = merged.get(term, 0.0) + weight
    return merged


def _candidate_scores(
    index: InvertedIndex,
    weighted_terms: dict[str, float],
    scorer: str,
    params: BM25Params | QLParams,
) -> tuple[np.ndarray, np.ndarray]:
    """Score every document matching at least one positively weighted term."""
    matched = [t for t in weighted_terms if t in index.postings]
    if not matched:
        return np.empty(0, dtype=np.int64), np.empty(0)
    candidates = np.unique(np.concatenate([index.postings[t][0] for t in matched]))
    scores = np.zeros(len(candidates))
    dl = index.doc_lengths[candidates].astype(np.float64)

    if scorer == "bm25":
        if not isinstance(params, BM25Params):
            raise TypeError("bm25 scorer needs BM25Params")
        norm = params.k1 * (1.0 - params.b + params.b * dl / index.avgdl)
        for term in matched:
            weight = weighted_terms[term]
            ordinals, tfs = index.postings[term]
            pos = np.searchsorted(candidates, ordinals)
            tf = tfs.astype(np.float64)
            scores[pos] += (
                weight * _idf(index, term) * tf * (params.k1 + 1.0) / (tf + norm[pos])
            )
    elif scorer == "ql":
        if not isinstance(params, QLParams):
            raise TypeError("ql scorer needs QLParams")
        log_denom = np.log(dl + params.mu)
        for term, weight in weighted_terms.items():
            p_coll = index.collection_prob(term)
            if p_coll == 0.0:
                scores += weight * math.log(ZERO_PROB_FLOOR)
                continue
            base = math.log(params.mu * p_coll)
            scores += weight * (base - log_denom)
            entry = index.postings.get(term)
            if entry is None:
                continue
            ordinals, tfs = entry
            pos = np.searchsorted(candidates, ordinals)
            scores[pos] += weight * (
                np.log(tfs.astype(np.float64) + params.mu * p_coll) - base
            )
    else:
        raise ValueError(f"unknown scorer {scorer!r}")
    return candidates, scores


def _top_k(
    index: InvertedIndex,
    query_id: str,
    candidates: np.ndarray,
    scores: np.ndarray,
    k: int,
) -> RankedList:
    pairs = ((float(scores[i]), index.doc_ids[candidates[i]]) for i in range(len(candidates)))
    best = heapq.nsmallest(k, pairs, key=lambda p: (-p[0], p[1]))
    return RankedList(query_id, [(doc_id, score) for score, doc_id in best])


def search(
    index: InvertedIndex,
    query: Query,
    scorer: str = "bm25",
    params: BM25Params | QLParams | None = None,
    k: int = 10,
) -> RankedList:
    """Top-k documents for the query; empty query analyzes to an empty list."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if params is None:
        params = BM25Params() if scorer == "bm25" else QLParams()
    tokens = tokenize(query.text, index.analyzer)
    if not tokens:
        return RankedList(query.id, [])
    weights = _merge_weights([(t, 1.0) for t in tokens])
    candidates, scores = _candidate_scores(index, weights, scorer, params)
    return _top_k(index, query.id, candidates, scores, k)


def weighted_search(
    index: InvertedIndex,
    query_id: str,
    weighted_query: list[tuple[str, float]],
    scorer: str = "bm25",
    params: BM25Params | QLParams | None = None,
    k: int = 10,
) -> RankedList:
    """As search, but each term's contribution is scaled by its weight.

    Terms with weight <= 0 are dropped and do not generate candidates.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if params is None:
        params = BM25Params() if scorer == "bm25" else QLParams()
    weights = _merge_weights(weighted_query)
    if not weights:
        return RankedList(query_id, [])
    candidates, scores = _candidate_scores(index, weights, scorer, params)
    return _top_k(index, query_id, candidates, scores, k)


def query_mle(query_tokens: list[str]) -> list[tuple[str, float]]:
    """Maximum-likelihood term distribution of the query."""
    if not query_tokens:
        return []
    weight = 1.0 / len(query_tokens)
    mle: dict[str, float] = {}
    for token in query_tokens:
        mle[token] = mle.get(token, 0.0) + weight
    return sorted(mle.items(), key=lambda kv: (-kv[1], kv[0]))


def _feedback_term_distributions(
    index: InvertedIndex, ordinals: list[int]
) -> list[dict[str, float]]:
    """P(term | doc) for each feedback doc, via one pass over the postings."""
    wanted = {ordinal: i for i, ordinal in enumerate(ordinals)}
    dists: list[dict[str, float]] = [{} for _ in ordinals]
    for term, (term_ordinals, tfs) in index.postings.items():
        for ordinal, tf in zip(term_ordinals.tolist(), tfs.tolist()):
            i = wanted.get(ordinal)
            if i is not None:
                dists[i][term] = tf
    for i, ordinal in enumerate(ordinals):
        dl = float(index.doc_lengths[ordinal])
        if dl > 0:
            dists[i] = {t: tf / dl for t, tf in dists[i].items()}
    return dists


def rm3_expand(
    index: InvertedIndex,
    query_tokens: list[str],
    first_pass: RankedList,
    params: RM3Params = RM3Params(),
) -> list[tuple[str, float]]:
    """Interpolate the query MLE with a relevance model from feedback docs.

    The relevance model weights P(term|doc) by the softmax of the first-pass
    scores, keeps the fb_terms heaviest terms, and renormalizes. Returned
    weights sum to 1. An empty first pass returns the query MLE unchanged.
    """
    mle = query_mle(query_tokens)
    feedback = first_pass.entries[: params.fb_docs]
    if not feedback:
        return mle

    scores = np.array([score for _, score in feedback])
    softmax = np.exp(scores - scores.max())
    softmax /= softmax.sum()

    ordinals = [index.ordinal(doc_id) for doc_id, _ in feedback]
    dists = _feedback_term_distributions(index, ordinals)
    model: dict[str, float] = {}
    for dist, doc_weight in zip(dists, softmax):
        for term, p in dist.items():
            model[term] = model.get(term, 0.0) + p * float(doc_weight)

    top = sorted(model.items(), key=lambda kv: (-kv[1], kv[0]))[: params.fb_terms]
    total = sum(w for _, w in top)
    if total <= 0.0:
        return mle
    relevance = {t: w / total for t, w in top}

    ow = params.original_weight
    combined: dict[str, float] = {t: ow * w for t, w in mle}
    for term, w in relevance.items():
        combined[term] = combined.get(term, 0.0) + (1.0 - ow) * w
    positive = [(t, w) for t, w in combined.items() if w > 0.0]
    return sorted(positive, key=lambda kv: (-kv[1], kv[0]))
