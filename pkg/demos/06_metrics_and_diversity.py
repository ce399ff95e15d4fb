"""Evaluation: rank metrics over a run, and lexical diversity of expansions.

The evaluate step consumes standard six-column run files and qrels; the
diversity statistic summarizes how varied the generated sentences are
(unique unigrams / total unigrams, averaged per document).
"""

from expandir import EvalConfig, Qrels, RunEntry, evaluate_run, lexical_diversity
from expandir.corpus import ExpandedDocument

qrels = Qrels()
qrels.add("q1", "d1", 3)
qrels.add("q1", "d2", 1)
qrels.add("q1", "d9", 2)
qrels.add("q2", "d4", 1)

run = [
    RunEntry("q1", "d1", 1, 9.1, "demo"),
    RunEntry("q1", "d3", 2, 7.4, "demo"),
    RunEntry("q1", "d2", 3, 6.0, "demo"),
    RunEntry("q2", "d5", 1, 3.3, "demo"),
    RunEntry("q2", "d4", 2, 2.8, "demo"),
]

report = evaluate_run(run, qrels, EvalConfig(cutoffs=(1, 3)))
print("aggregates:")
print(report.to_tsv())
print("per query:")
for qid, row in report.per_query.items():
    print(f"  {qid}: " + "  ".join(f"{k}={v:.3f}" for k, v in sorted(row.items())))

print("\nlexical diversity:")
repetitive = [ExpandedDocument("d", "", ("the storm hit", "the storm hit", "the storm hit"))]
varied = [ExpandedDocument("d", "", ("the storm hit", "floods followed", "power failed"))]
print(f"  repetitive generations: {lexical_diversity(repetitive):.3f}")
print(f"  varied generations:     {lexical_diversity(varied):.3f}")
