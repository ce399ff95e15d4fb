"""Term-based retrieval with generation-based document expansion at indexing time."""

from .analysis import AnalyzerConfig, split_sentences, tokenize
from .corpus import (
    Document,
    ExpandedDocument,
    FormatError,
    Qrels,
    Query,
    RunEntry,
    load_collection_tsv,
    load_qrels,
    load_queries_tsv,
    read_expanded_jsonl,
    read_run,
    write_expanded_jsonl,
    write_run,
)
from .eval import EvalConfig, EvalReport, evaluate_run, lexical_diversity
from .expansion import (
    ExpansionResult,
    ExpansionSummary,
    GenerationClient,
    GenerationError,
    GeneratorSpec,
    expand_collection,
    expand_document,
    lexrank_extract,
    make_generator,
    mock_synonym_generate,
    rank_sentences,
    remote_generate,
)
from .index import InvertedIndex, build_index
from .retrieval import (
    BM25Params,
    QLParams,
    RankedList,
    RM3Params,
    bm25_score,
    ql_score,
    rm3_expand,
    search,
    weighted_search,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyzerConfig",
    "BM25Params",
    "Document",
    "EvalConfig",
    "EvalReport",
    "ExpandedDocument",
    "ExpansionResult",
    "ExpansionSummary",
    "FormatError",
    "GenerationClient",
    "GenerationError",
    "GeneratorSpec",
    "InvertedIndex",
    "QLParams",
    "Qrels",
    "Query",
    "RM3Params",
    "RankedList",
    "RunEntry",
    "bm25_score",
    "build_index",
    "evaluate_run",
    "expand_collection",
    "expand_document",
    "lexical_diversity",
    "lexrank_extract",
    "load_collection_tsv",
    "load_qrels",
    "load_queries_tsv",
    "make_generator",
    "mock_synonym_generate",
    "ql_score",
    "rank_sentences",
    "read_expanded_jsonl",
    "read_run",
    "remote_generate",
    "rm3_expand",
    "search",
    "split_sentences",
    "tokenize",
    "weighted_search",
    "write_expanded_jsonl",
    "write_run",
]
