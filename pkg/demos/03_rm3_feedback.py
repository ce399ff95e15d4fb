"""RM3 pseudo-relevance feedback.

A first-pass search supplies feedback documents; their term distributions
(softmax-weighted by score) are interpolated with the query's own term
distribution, and the reweighted query is searched again.
"""

from expandir import AnalyzerConfig, Document, Query, RM3Params, build_index, search, tokenize
from expandir.retrieval import rm3_expand, weighted_search

docs = [
    Document("a1", "espresso brewing needs a fine coffee grind"),
    Document("a2", "coffee roasting darkens the bean"),
    Document("a3", "a pour over needs a coarse coffee grind and a slow kettle"),
    Document("a4", "tea steeping times for green tea"),
    Document("a5", "kettle maintenance and descaling"),
]
index = build_index(docs, AnalyzerConfig())
query = Query("q", "coffee grind")
tokens = tokenize(query.text, index.analyzer)

first = search(index, query, "bm25", k=3)
print("first pass:", [doc_id for doc_id, _ in first.entries])

params = RM3Params(fb_docs=2, fb_terms=6, original_weight=0.5)
weighted = rm3_expand(index, tokens, first, params)
print("\nexpanded query (term, weight):")
for term, weight in weighted:
    print(f"  {term:<8} {weight:.4f}")
print("weights sum to", round(sum(w for _, w in weighted), 9))

second = weighted_search(index, query.id, weighted, "bm25", k=5)
print("\nsecond pass:", [doc_id for doc_id, _ in second.entries])
print("feedback pulled in espresso/brewing vocabulary from the top documents.")
