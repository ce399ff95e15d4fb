"""Vocabulary mismatch, demonstrated and repaired.

A document written entirely in synonyms of the query's words is invisible
to term matching. Expanding the document at indexing time with generated
text that uses the query-side vocabulary makes it retrievable, without
touching the query path.
"""

from expandir import AnalyzerConfig, Document, Query, build_index, expand_document, search
from expandir.corpus import ExpandedDocument
from expandir.expansion import GeneratorSpec, make_generator

docs = [
    Document("target", "the automobile motor roared"),
    Document("noise1", "ships sail the ocean"),
    Document("noise2", "bread and butter prices"),
]
query = Query("q", "car engine")
analyzer = AnalyzerConfig()

index = build_index(docs, analyzer)
print("before expansion:", search(index, query, "bm25", k=3).entries, "(target unreachable)")

table = {"automobile": ["car"], "motor": ["engine"]}
generator = make_generator(GeneratorSpec("mock-synonym", num_sequences=2, seed=0), analyzer, table)
results = [expand_document(d, generator, analyzer) for d in docs]
for r in results:
    print(f"  {r.doc_id}: generated={list(r.sequences)}  novel_tokens={r.novel_token_count}")

expanded_docs = [Document(r.doc_id, r.expanded_text) for r in results]
index2 = build_index(expanded_docs, analyzer)
print("after expansion: ", search(index2, query, "bm25", k=3).entries)
print("\nthe expanded form of the target document:")
print(" ", ExpandedDocument("target", docs[0].text, results[0].sequences).combined_text())
