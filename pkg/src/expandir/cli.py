"""Command line for the end-to-end workflow.

Subcommands: index, expand, search, evaluate, diversity, sample.
Exit status: 0 success, 1 usage error, 2 runtime error, 3 partial success
(expansion finished but some documents failed).
"""

from __future__ import annotations

import argparse
import logging
import os
import random
import sys
from pathlib import Path

from . import corpus, expansion, retrieval
from .analysis import AnalyzerConfig, tokenize
from .eval import EvalConfig, evaluate_run, lexical_diversity
from .index import InvertedIndex, build_index

log = logging.getLogger(__name__)

ENDPOINT_ENV_VAR = "EXPANDIR_ENDPOINT"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit status 1
        raise UsageError(message)


def _analyzer_from_args(args: argparse.Namespace) -> AnalyzerConfig:
    return AnalyzerConfig(
        lowercase=not args.no_lowercase,
        stemming=not args.no_stemming,
        stopwords=not args.no_stopwords,
    )


def _add_analyzer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--no-lowercase", action="store_true")
    parser.add_argument("--no-stemming", action="store_true")
    parser.add_argument("--no-stopwords", action="store_true")


def _load_input_collection(path: str) -> list[corpus.Document]:
    """TSV collections or expanded JSONL; the latter re-indexes generated text."""
    if path.endswith(".jsonl"):
        expanded = corpus.read_expanded_jsonl(path)
        return [corpus.Document(d.id, d.combined_text()) for d in expanded]
    return corpus.load_collection_tsv(path)


def build_parser() -> _Parser:
    parser = _Parser(prog="expandir", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="build an index snapshot")
    p.add_argument("--input", required=True, help="collection .tsv or expanded .jsonl")
    p.add_argument("--output", required=True, help="index snapshot path")
    _add_analyzer_flags(p)

    p = sub.add_parser("expand", parents=[common], help="expand a collection")
    p.add_argument("--input", required=True, help="collection .tsv")
    p.add_argument("--output", required=True, help="expanded .jsonl")
    p.add_argument("--generator", required=True, choices=["lexrank", "mock", "remote"])
    p.add_argument("--synonyms", help="token<TAB>syn1,syn2 table (mock generator)")
    p.add_argument("--endpoint", default=os.environ.get(ENDPOINT_ENV_VAR),
                   help=f"generation service URL (or ${ENDPOINT_ENV_VAR})")
    p.add_argument("--max-retries", type=int, default=3,
                   help="retry budget per document for the remote service")
    p.add_argument("--backoff", type=float, default=0.5,
                   help="base seconds for exponential retry backoff")
    p.add_argument("--strategy", default="mc-dropout", choices=list(expansion.STRATEGIES))
    p.add_argument("--num-sequences", type=int, default=4)
    p.add_argument("--beam-size", type=int, default=8)
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--sentences-per-sequence", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    _add_analyzer_flags(p)

    p = sub.add_parser("search", parents=[common], help="run queries against an index")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", required=True, help="queries .tsv")
    p.add_argument("--scorer", default="bm25", choices=["bm25", "ql"])
    p.add_argument("--rm3", action="store_true", help="apply RM3 feedback")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--output", required=True, help="run file path")
    p.add_argument("--tag", default="expandir")
    p.add_argument("--k1", type=float, default=0.9)
    p.add_argument("--b", type=float, default=0.4)
    p.add_argument("--mu", type=float, default=1000.0)
    p.add_argument("--fb-docs", type=int, default=10)
    p.add_argument("--fb-terms", type=int, default=10)
    p.add_argument("--original-weight", type=float, default=0.5)

    p = sub.add_parser("evaluate", parents=[common], help="score a run against qrels")
    p.add_argument("--run", required=True)
    p.add_argument("--qrels", required=True)
    p.add_argument("--cutoffs", default="1,5,10")
    p.add_argument("--mrr-cutoff", type=int)
    p.add_argument("--threshold", type=int, default=1)
    p.add_argument("--linear-gain", action="store_true", help="linear NDCG gain")
    p.add_argument("--json", action="store_true", help="JSON report instead of TSV")

    p = sub.add_parser("diversity", parents=[common],
                       help="lexical diversity of an expanded collection")
    p.add_argument("--expanded", required=True, help="expanded .jsonl")

    p = sub.add_parser("sample", parents=[common], help="seeded line sample of a TSV")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)

    return parser


def _cmd_index(args: argparse.Namespace) -> int:
    collection = _load_input_collection(args.input)
    index = build_index(collection, _analyzer_from_args(args))
    index.save(args.output)
    print(f"indexed {index.doc_count} docs, {len(index.postings)} terms -> {args.output}")
    return 0


def _cmd_expand(args: argparse.Namespace) -> int:
    kind = {"lexrank": "lexrank", "mock": "mock-synonym", "remote": "remote-abstractive"}[
        args.generator
    ]
    spec = expansion.GeneratorSpec(
        kind=kind,
        num_sequences=args.num_sequences,
        strategy=args.strategy,
        beam_size=args.beam_size,
        top_k=args.top_k,
        seed=args.seed,
        sentences_per_sequence=args.sentences_per_sequence,
    )
    table = None
    client = None
    if kind == "mock-synonym":
        if not args.synonyms:
            raise UsageError("--synonyms is required with --generator mock")
        table = expansion.load_synonym_table(args.synonyms)
    if kind == "remote-abstractive":
        if not args.endpoint:
            raise UsageError(
                f"--endpoint (or ${ENDPOINT_ENV_VAR}) is required with --generator remote"
            )
        client = expansion.GenerationClient(
            args.endpoint, max_retries=args.max_retries, backoff=args.backoff
        )
    analyzer = _analyzer_from_args(args)
    generator = expansion.make_generator(spec, analyzer, table, client)
    collection = corpus.load_collection_tsv(args.input)
    summary = expansion.expand_collection(
        collection, generator, analyzer, args.output, parallelism=args.parallelism
    )
    print(
        f"expanded {summary.docs_processed} docs ({summary.failures} failed), "
        f"mean generated tokens {summary.mean_token_count:.2f}, "
        f"mean novel tokens {summary.mean_novel_count:.2f}, "
        f"mean novelty ratio {summary.mean_novelty_ratio:.4f}"
    )
    return 3 if summary.failures else 0


def _cmd_search(args: argparse.Namespace) -> int:
    index = InvertedIndex.load(args.index)
    queries = corpus.load_queries_tsv(args.queries)
    if args.scorer == "bm25":
        params: retrieval.BM25Params | retrieval.QLParams = retrieval.BM25Params(
            k1=args.k1, b=args.b
        )
    else:
        params = retrieval.QLParams(mu=args.mu)
    rm3_params = retrieval.RM3Params(
        fb_docs=args.fb_docs, fb_terms=args.fb_terms, original_weight=args.original_weight
    )
    entries: list[corpus.RunEntry] = []
    for query in queries:
        if args.rm3:
            tokens = tokenize(query.text, index.analyzer)
            first = retrieval.search(
                index, query, args.scorer, params, k=max(rm3_params.fb_docs, 1)
            )
            weighted = retrieval.rm3_expand(index, tokens, first, rm3_params)
            ranked = retrieval.weighted_search(
                index, query.id, weighted, args.scorer, params, k=args.k
            )
        else:
            ranked = retrieval.search(index, query, args.scorer, params, k=args.k)
        for rank, (doc_id, score) in enumerate(ranked.entries, start=1):
            entries.append(corpus.RunEntry(query.id, doc_id, rank, score, args.tag))
    corpus.write_run(entries, args.output)
    print(f"wrote {len(entries)} result lines for {len(queries)} queries -> {args.output}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    try:
        cutoffs = tuple(int(c) for c in args.cutoffs.split(",") if c)
    except ValueError:
        raise UsageError(f"bad --cutoffs value {args.cutoffs!r}")
    config = EvalConfig(
        relevance_threshold=args.threshold,
        cutoffs=cutoffs,
        mrr_cutoff=args.mrr_cutoff,
        exponential_gain=not args.linear_gain,
    )
    entries = corpus.read_run(args.run)
    qrels = corpus.load_qrels(args.qrels)
    report = evaluate_run(entries, qrels, config)
    sys.stdout.write(report.to_json() + "\n" if args.json else report.to_tsv())
    return 0


def _cmd_diversity(args: argparse.Namespace) -> int:
    docs = corpus.read_expanded_jsonl(args.expanded)
    value = lexical_diversity(docs)
    print(f"lexical_diversity\t{value:.6f}")
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    with open(args.input, encoding="utf-8") as f:
        lines = f.readlines()
    if args.n > len(lines):
        raise ValueError(f"cannot sample {args.n} of {len(lines)} lines")
    picked = sorted(random.Random(args.seed).sample(range(len(lines)), args.n))
    with open(args.output, "w", encoding="utf-8", newline="\n") as f:
        for i in picked:
            f.write(lines[i])
    print(f"sampled {args.n} of {len(lines)} lines -> {args.output}")
    return 0


_COMMANDS = {
    "index": _cmd_index,
    "expand": _cmd_expand,
    "search": _cmd_search,
    "evaluate": _cmd_evaluate,
    "diversity": _cmd_diversity,
    "sample": _cmd_sample,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    logging.basicConfig(level=args.log_level.upper())
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (corpus.FormatError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
