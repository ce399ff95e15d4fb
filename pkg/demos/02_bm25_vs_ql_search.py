"""BM25 and query likelihood side by side on a small corpus.

Both scorers rank by term overlap, but they weight evidence differently:
BM25 saturates term frequency and rewards rare terms; QL smooths document
language models against the collection, so document length matters more.
"""

from expandir import AnalyzerConfig, BM25Params, Document, QLParams, Query, build_index, search

docs = [
    Document("news1", "storm surge floods the harbor town"),
    Document("news2", "the harbor reopens after the storm"),
    Document("news3", "election results announced in the capital"),
    Document("news4", "storm storm storm a very stormy storm report storm"),
    Document("news5", "quiet day at the harbor"),
]
index = build_index(docs, AnalyzerConfig())

query = Query("q1", "harbor storm")
for scorer, params in (("bm25", BM25Params(k1=0.9, b=0.4)), ("ql", QLParams(mu=1000.0))):
    ranked = search(index, query, scorer, params, k=5)
    print(f"{scorer} ranking for {query.text!r}:")
    for position, (doc_id, score) in enumerate(ranked.entries, start=1):
        print(f"  {position}. {doc_id:<6} {score:>9.4f}")
    print()

print("note: news4 spams 'storm' but BM25's tf saturation keeps it from")
print("dominating documents that match both query terms.")
