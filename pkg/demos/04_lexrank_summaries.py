"""Extractive expansion with LexRank sentence centrality.

Sentences become TF-IDF vectors over the document's own sentence set; a
cosine-similarity graph links sentences that overlap; PageRank picks the
most central ones. Prepending them re-weights the document's key terms
without introducing any new vocabulary.
"""

from expandir import AnalyzerConfig, Document, expand_document, lexrank_extract, rank_sentences
from expandir.expansion import GeneratorSpec, make_generator

doc = Document(
    "article",
    "The reservoir dropped to a record low this summer. "
    "Farmers upstream pumped more water than in any previous year. "
    "Water restrictions now apply to every downstream town. "
    "The reservoir level controls how much water the towns receive. "
    "A wet winter could still refill the reservoir.",
)

analyzer = AnalyzerConfig()
print("sentence centrality:")
for sentence, score in rank_sentences(doc.text, analyzer):
    print(f"  {score:.4f}  {sentence}")

print("\ntop-2 extract:", lexrank_extract(doc, 2, analyzer))

generator = make_generator(GeneratorSpec("lexrank", sentences_per_sequence=2), analyzer)
result = expand_document(doc, generator, analyzer)
print(f"\nexpanded doc starts with the extract; generated tokens={result.token_count}, "
      f"novel={result.novel_token_count} (extractive, always 0)")
print(result.expanded_text[:120] + "...")
