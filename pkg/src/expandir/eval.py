"""Rank metrics over a run plus qrels, and the lexical-diversity statistic.

Binary metrics treat grade >= threshold as relevant. Queries with no
judged-relevant document are excluded from the P@K / R@K / MAP means (the
exclusion count is reported); MRR and NDCG include them, contributing 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .analysis import UNIGRAM_ANALYZER, tokenize
from .corpus import ExpandedDocument, Qrels, RunEntry


@dataclass(frozen=True)
class EvalConfig:
    relevance_threshold: int = 1
    cutoffs: tuple[int, ...] = (1, 5, 10)
    mrr_cutoff: int | None = None
    exponential_gain: bool = True  # NDCG gain 2^grade - 1; else linear

    def __post_init__(self) -> None:
        if self.relevance_threshold < 1:
            raise ValueError("relevance_threshold must be >= 1")
        if any(k < 1 for k in self.cutoffs):
            raise ValueError("cutoffs must be positive")
        if self.mrr_cutoff is not None and self.mrr_cutoff < 1:
            raise ValueError("mrr_cutoff must be positive")


def _relevant_set(grades: Mapping[str, int], config: EvalConfig) -> set[str]:
    return {d for d, g in grades.items() if g >= config.relevance_threshold}


def reciprocal_rank(
    ranked_ids: Sequence[str], grades: Mapping[str, int], config: EvalConfig = EvalConfig()
) -> float:
    """1/rank of the first relevant doc (within mrr_cutoff if set), else 0."""
    relevant = _relevant_set(grades, config)
    limit = config.mrr_cutoff or len(ranked_ids)
    for i, doc_id in enumerate(ranked_ids[:limit], start=1):
        if doc_id in relevant:
            return 1.0 / i
    return 0.0


def precision_at_k(
    ranked_ids: Sequence[str],
    grades: Mapping[str, int],
    k: int,
    config: EvalConfig = EvalConfig(),
) -> float:
    """Relevant docs in the top k, divided by k even when fewer are returned."""
    relevant = _relevant_set(grades, config)
    hits = sum(1 for d in ranked_ids[:k] if d in relevant)
    return hits / k


def recall_at_k(
    ranked_ids: Sequence[str],
    grades: Mapping[str, int],
    k: int,
    config: EvalConfig = EvalConfig(),
) -> float:
    relevant = _relevant_set(grades, config)
    if not relevant:
        return 0.0
    hits = sum(1 for d in ranked_ids[:k] if d in relevant)
    return hits / len(relevant)


def average_precision(
    ranked_ids: Sequence[str], grades: Mapping[str, int], config: EvalConfig = EvalConfig()
) -> float:
    """Mean of P@i over the ranks i of relevant docs, over all relevant docs."""
    relevant = _relevant_set(grades, config)
    if not relevant:
        return 0.0
    hits = 0
    total = 0.0
    for i, doc_id in enumerate(ranked_ids, start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / i
    return total / len(relevant)


def _gain(grade: int, config: EvalConfig) -> float:
    return (2.0**grade - 1.0) if config.exponential_gain else float(grade)


def ndcg_at_k(
    ranked_ids: Sequence[str],
    grades: Mapping[str, int],
    k: int,
    config: EvalConfig = EvalConfig(),
) -> float:
    """DCG@k normalized by the ideal DCG over all judged grades; 0 if no gain."""
    dcg = 0.0
    for i, doc_id in enumerate(ranked_ids[:k], start=1):
        dcg += _gain(grades.get(doc_id, 0), config) / math.log2(i + 1)
    ideal = sorted(grades.values(), reverse=True)[:k]
    idcg = sum(_gain(g, config) / math.log2(i + 1) for i, g in enumerate(ideal, start=1))
    return dcg / idcg if idcg > 0 else 0.0


def lexical_diversity(docs: Sequence[ExpandedDocument]) -> float:
    """Mean per-document share of unique unigrams in the generated sentences.

    Unigrams come from the lowercase-only analyzer; documents with no
    generated tokens are skipped.
    """
    ratios = []
    for doc in docs:
        tokens = [t for s in doc.generated for t in tokenize(s, UNIGRAM_ANALYZER)]
        if tokens:
            ratios.append(len(set(tokens)) / len(tokens))
    return sum(ratios) / len(ratios) if ratios else 0.0


@dataclass
class EvalReport:
    per_query: dict[str, dict[str, float]] = field(default_factory=dict)
    aggregates: dict[str, float] = field(default_factory=dict)
    queries_evaluated: int = 0
    queries_without_judgments: int = 0
    queries_zero_relevant: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "aggregates": self.aggregates,
                "queries_evaluated": self.queries_evaluated,
                "queries_without_judgments": self.queries_without_judgments,
                "queries_zero_relevant": self.queries_zero_relevant,
                "per_query": self.per_query,
            },
            indent=2,
            sort_keys=True,
        )

    def to_tsv(self) -> str:
        lines = [f"{name}\t{value:.6f}" for name, value in self.aggregates.items()]
        lines.append(f"queries_evaluated\t{self.queries_evaluated}")
        lines.append(f"queries_without_judgments\t{self.queries_without_judgments}")
        lines.append(f"queries_zero_relevant\t{self.queries_zero_relevant}")
        return "\n".join(lines) + "\n"


def evaluate_run(
    entries: Sequence[RunEntry], qrels: Qrels, config: EvalConfig = EvalConfig()
) -> EvalReport:
    """Per-query metrics and their means over the run.

    Queries present in the run but absent from the qrels are skipped and
    tallied separately.
    """
    ranked: dict[str, list[tuple[int, str]]] = {}
    for e in entries:
        ranked.setdefault(e.query_id, []).append((e.rank, e.doc_id))

    report = EvalReport()
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}

    def accumulate(name: str, value: float) -> None:
        sums[name] = sums.get(name, 0.0) + value
        counts[name] = counts.get(name, 0) + 1

    for query_id, pairs in ranked.items():
        grades = qrels.grades_for_query(query_id)
        if not grades:
            report.queries_without_judgments += 1
            continue
        report.queries_evaluated += 1
        ids = [doc_id for _, doc_id in sorted(pairs)]
        row: dict[str, float] = {}

        row["mrr"] = reciprocal_rank(ids, grades, config)
        accumulate("mrr", row["mrr"])
        for k in config.cutoffs:
            row[f"ndcg@{k}"] = ndcg_at_k(ids, grades, k, config)
            accumulate(f"ndcg@{k}", row[f"ndcg@{k}"])

        if _relevant_set(grades, config):
            row["map"] = average_precision(ids, grades, config)
            accumulate("map", row["map"])
            for k in config.cutoffs:
                row[f"p@{k}"] = precision_at_k(ids, grades, k, config)
                row[f"r@{k}"] = recall_at_k(ids, grades, k, config)
                accumulate(f"p@{k}", row[f"p@{k}"])
                accumulate(f"r@{k}", row[f"r@{k}"])
        else:
            report.queries_zero_relevant += 1

        report.per_query[query_id] = row

    metric_order = ["mrr", "map"]
    for k in config.cutoffs:
        metric_order += [f"p@{k}", f"r@{k}", f"ndcg@{k}"]
    for name in metric_order:
        if counts.get(name):
            report.aggregates[name] = sums[name] / counts[name]
    return report
