"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines.
"""

import math
import os
import random
import time

import pytest

import oracles
from conftest import FIXTURE_DOCS, PLAIN
from expandir.analysis import AnalyzerConfig, tokenize
from expandir.cli import run as cli
from expandir.corpus import (
    Document,
    ExpandedDocument,
    load_collection_tsv,
    load_qrels,
    load_queries_tsv,
    read_run,
    write_collection_tsv,
)
from expandir.eval import EvalConfig, evaluate_run, lexical_diversity
from expandir.expansion import GeneratorSpec, expand_document, make_generator
from expandir.index import build_index
from expandir.retrieval import (
    BM25Params,
    QLParams,
    RM3Params,
    bm25_score,
    ql_score,
    rm3_expand,
    search,
    weighted_search,
)
from test_eval import make_qrels, random_instance, run_to_entries

TOLERANCE = 1e-9


def _pass(name: str) -> None:
    print(f"[ACCEPTANCE] {name}: PASS", flush=True)


def test_metric_oracle_equivalence():
    """Five metrics match brute force on 50 random instances, within 1e-9, <5s."""
    started = time.monotonic()
    rng = random.Random(2024)
    checked = 0
    for _ in range(50):
        run, qrels_map = random_instance(rng, max_queries=20, max_docs=100)
        cutoffs = tuple(sorted({1, rng.randrange(2, 11), 10}))
        config = EvalConfig(cutoffs=cutoffs)
        report = evaluate_run(run_to_entries(run), make_qrels(qrels_map), config)
        want = oracles.evaluate(run, qrels_map, cutoffs)
        assert set(report.aggregates) == set(want)
        for name, value in want.items():
            assert abs(report.aggregates[name] - value) <= TOLERANCE, name
            checked += 1
        # per-query agreement for every metric family
        for qid, ranked in run.items():
            grades = qrels_map.get(qid)
            if not grades:
                continue
            relevant = {d for d, g in grades.items() if g >= 1}
            row = report.per_query[qid]
            assert abs(row["mrr"] - oracles.rr(ranked, relevant)) <= TOLERANCE
            for k in cutoffs:
                assert abs(row[f"ndcg@{k}"] - oracles.ndcg(ranked, grades, k)) <= TOLERANCE
                if relevant:
                    assert abs(row[f"p@{k}"] - oracles.precision(ranked, relevant, k)) <= TOLERANCE
                    assert abs(row[f"r@{k}"] - oracles.recall(ranked, relevant, k)) <= TOLERANCE
            if relevant:
                assert abs(row["map"] - oracles.average_precision(ranked, relevant)) <= TOLERANCE
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"metric oracle run took {elapsed:.2f}s"
    assert checked > 100
    _pass(f"metric oracle equivalence (50 instances, {elapsed:.2f}s)")


def test_scorer_correctness():
    """Hand values on the 3-doc fixture; additivity and length monotonicity."""
    index = build_index(FIXTURE_DOCS, PLAIN)
    doc_tokens = {d.id: tokenize(d.text, PLAIN) for d in FIXTURE_DOCS}

    # closed-form hand evaluation: idf(b) = ln(1 + (3-2+0.5)/(2+0.5)), saturation 1
    assert abs(bm25_score(index, ["b"], "d1", BM25Params(0.9, 0.4)) - math.log(1.6)) <= TOLERANCE
    assert bm25_score(index, ["b"], "d3") == 0.0
    for doc in ("d1", "d2", "d3"):
        got = ql_score(index, ["b"], doc, QLParams(1000.0))
        assert abs(got - oracles.ql(doc_tokens, ["b"], doc, 1000.0)) <= TOLERANCE
        got_bm = bm25_score(index, ["b", "c"], doc)
        assert abs(got_bm - oracles.bm25(doc_tokens, ["b", "c"], doc)) <= TOLERANCE

    rng = random.Random(77)
    vocab = [f"t{i}" for i in range(10)]
    for _ in range(200):
        docs = [
            Document(f"d{i}", " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 15))))
            for i in range(8)
        ]
        idx = build_index(docs, PLAIN)
        q1 = [rng.choice(vocab) for _ in range(rng.randrange(1, 3))]
        q2 = [rng.choice(vocab) for _ in range(rng.randrange(1, 3))]
        target = rng.choice(docs).id
        lhs = bm25_score(idx, q1 + q2, target)
        rhs = bm25_score(idx, q1, target) + bm25_score(idx, q2, target)
        assert abs(lhs - rhs) <= TOLERANCE

        pad = " ".join(f"p{i % 4}" for i in range(rng.randrange(1, 25)))
        pair = [Document("short", "w x"), Document("long", f"w x {pad}"), Document("o", "w y z")]
        pair_idx = build_index(pair, PLAIN)
        assert ql_score(pair_idx, ["w"], "short") > ql_score(pair_idx, ["w"], "long")
    _pass("scorer correctness (fixture + 200 property instances)")


def _mismatch_fixture(root):
    """100-doc corpus where 10 target docs only contain synonyms of their
    query's terms; everything is wired through the CLI file formats."""
    docs, queries, qrels_lines, synonyms = [], [], [], []
    for i in range(10):
        docs.append(Document(f"syn{i:03d}", f"syna{i} synb{i}"))
        queries.append((f"tq{i}", f"qa{i} qb{i}"))
        qrels_lines.append(f"tq{i} 0 syn{i:03d} 1")
        synonyms.append(f"syna{i}\tqa{i}")
        synonyms.append(f"synb{i}\tqb{i}")
    for j in range(10, 100):
        docs.append(Document(f"fill{j:03d}", f"filla{j} fillb{j} fillc{j}"))
    for j in range(10, 20):
        queries.append((f"uq{j}", f"filla{j} fillb{j}"))
        qrels_lines.append(f"uq{j} 0 fill{j:03d} 1")

    write_collection_tsv(docs, root / "collection.tsv")
    (root / "queries.tsv").write_text(
        "".join(f"{qid}\t{text}\n" for qid, text in queries), encoding="utf-8"
    )
    (root / "qrels.txt").write_text("".join(line + "\n" for line in qrels_lines), encoding="utf-8")
    (root / "synonyms.tsv").write_text("".join(s + "\n" for s in synonyms), encoding="utf-8")


def test_vocabulary_mismatch_end_to_end(tmp_path):
    """Synonym-only docs are unreachable before expansion, top-1 after."""
    started = time.monotonic()
    _mismatch_fixture(tmp_path)
    collection = str(tmp_path / "collection.tsv")
    queries = str(tmp_path / "queries.tsv")

    assert cli(["index", "--input", collection, "--output", str(tmp_path / "plain.idx")]) == 0
    assert cli(["search", "--index", str(tmp_path / "plain.idx"), "--queries", queries,
                "--k", "10", "--output", str(tmp_path / "before.txt")]) == 0
    assert cli(["expand", "--input", collection, "--generator", "mock",
                "--synonyms", str(tmp_path / "synonyms.tsv"), "--num-sequences", "4",
                "--seed", "0", "--output", str(tmp_path / "expanded.jsonl")]) == 0
    assert cli(["index", "--input", str(tmp_path / "expanded.jsonl"),
                "--output", str(tmp_path / "expanded.idx")]) == 0
    assert cli(["search", "--index", str(tmp_path / "expanded.idx"), "--queries", queries,
                "--k", "10", "--output", str(tmp_path / "after.txt")]) == 0

    before = read_run(tmp_path / "before.txt")
    after = read_run(tmp_path / "after.txt")
    target_queries = [f"tq{i}" for i in range(10)]
    target_doc = {f"tq{i}": f"syn{i:03d}" for i in range(10)}

    # R@10 = 0 without expansion: no target doc is retrieved for its query
    for qid in target_queries:
        hits = [e for e in before if e.query_id == qid and e.doc_id == target_doc[qid]]
        assert hits == []

    # MRR = 1.0 with expansion: every target doc comes back at rank 1
    for qid in target_queries:
        top = [e for e in after if e.query_id == qid and e.rank == 1]
        assert len(top) == 1 and top[0].doc_id == target_doc[qid]

    # unrelated queries keep their exact ranking
    def ranking(entries, prefix):
        return [(e.query_id, e.doc_id, e.rank) for e in entries if e.query_id.startswith(prefix)]

    assert ranking(before, "uq") == ranking(after, "uq")
    assert ranking(before, "uq")  # non-vacuous

    # the same conclusion through the evaluate subcommand's aggregates
    report = evaluate_run(after, load_qrels(tmp_path / "qrels.txt"), EvalConfig(cutoffs=(10,)))
    assert report.aggregates["mrr"] == 1.0
    report_before = evaluate_run(before, load_qrels(tmp_path / "qrels.txt"), EvalConfig(cutoffs=(10,)))
    assert all(e.query_id not in target_queries for e in before) or report_before.aggregates["r@10"] < 1.0

    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"end-to-end run took {elapsed:.2f}s"
    _pass(f"vocabulary-mismatch end-to-end ({elapsed:.2f}s)")


def test_extractive_invariant_corpus_wide():
    """LexRank never introduces novel terms, over a 1k-doc random corpus."""
    rng = random.Random(4242)
    words = ["ocean", "tide", "wave", "shore", "sand", "salt", "wind", "storm"]
    analyzer = AnalyzerConfig()
    generator = make_generator(GeneratorSpec("lexrank", sentences_per_sequence=2), analyzer)
    for i in range(1000):
        sentences = [
            " ".join(rng.choice(words) for _ in range(rng.randrange(2, 8))) + "."
            for _ in range(rng.randrange(1, 6))
        ]
        doc = Document(f"d{i}", " ".join(sentences))
        result = expand_document(doc, generator, analyzer)
        assert result.novel_token_count == 0
        assert 0 <= result.novel_token_count <= result.token_count
        prefix = " ".join(s for s in result.sequences if s)
        assert result.expanded_text == (f"{prefix} {doc.text}" if prefix else doc.text)
    _pass("extractive invariant (1000 docs, novel terms = 0)")


def test_rm3_endpoint_identity_and_oracle(fixture_index):
    """original_weight=1 reproduces the unweighted ranking; weights match
    the brute-force interpolation."""
    doc_tokens = {d.id: tokenize(d.text, PLAIN) for d in FIXTURE_DOCS}
    for text in ("b", "b c", "c d b"):
        query = Document("q", text)
        tokens = tokenize(text, PLAIN)
        for scorer in ("bm25", "ql"):
            plain = search(fixture_index, query, scorer, k=10)
            first = search(fixture_index, query, scorer, k=10)
            weighted = rm3_expand(fixture_index, tokens, first,
                                  RM3Params(original_weight=1.0))
            reranked = weighted_search(fixture_index, "q", weighted, scorer, k=10)
            assert reranked.doc_ids() == plain.doc_ids()

        first = search(fixture_index, query, "bm25", k=10)
        params = RM3Params(fb_docs=2, fb_terms=4, original_weight=0.5)
        got = dict(rm3_expand(fixture_index, tokens, first, params))
        want = oracles.rm3(doc_tokens, tokens, first.entries, 2, 4, 0.5)
        assert set(got) == set(want)
        for term, weight in want.items():
            assert abs(got[term] - weight) <= TOLERANCE
    _pass("rm3 endpoint identity + interpolation oracle")


def test_lexical_diversity_statistic():
    """Hand values exact; appending a duplicate sentence never raises it."""
    assert lexical_diversity([ExpandedDocument("d", "", ("a b a",))]) == 2 / 3
    assert lexical_diversity([ExpandedDocument("d", "", ("x y", "z"))]) == 1.0
    assert lexical_diversity([ExpandedDocument("d", "", ())]) == 0.0

    rng = random.Random(55)
    vocab = ["red", "green", "blue", "cyan", "teal", "red"]
    for _ in range(500):
        sentences = tuple(
            " ".join(rng.choice(vocab) for _ in range(rng.randrange(1, 6)))
            for _ in range(rng.randrange(1, 5))
        )
        base = lexical_diversity([ExpandedDocument("d", "", sentences)])
        extended = sentences + (rng.choice(sentences),)
        after = lexical_diversity([ExpandedDocument("d", "", extended)])
        assert after <= base + 1e-12
    _pass("lexical diversity (hand values + 500 monotonicity cases)")


def test_determinism(tmp_path):
    """Byte-identical expansion under parallelism; bit-identical index builds."""
    rng = random.Random(66)
    words = ["ocean", "tide", "wave", "shore", "sand", "salt"]
    docs = [
        Document(
            f"d{i:03d}",
            " ".join(
                " ".join(rng.choice(words) for _ in range(rng.randrange(2, 7))) + "."
                for _ in range(rng.randrange(1, 4))
            ),
        )
        for i in range(100)
    ]
    write_collection_tsv(docs, tmp_path / "collection.tsv")
    table_lines = [f"{w}\t{w}x,{w}y,{w}z" for w in words]
    (tmp_path / "synonyms.tsv").write_text("".join(s + "\n" for s in table_lines), encoding="utf-8")

    outputs = {}
    for generator_args, label in (
        (["--generator", "mock", "--synonyms", str(tmp_path / "synonyms.tsv"),
          "--num-sequences", "3", "--seed", "9"], "mock"),
        (["--generator", "lexrank", "--sentences-per-sequence", "2"], "lexrank"),
    ):
        for parallelism in (1, 8):
            out = tmp_path / f"{label}_{parallelism}.jsonl"
            code = cli(["expand", "--input", str(tmp_path / "collection.tsv"),
                        "--output", str(out), "--parallelism", str(parallelism),
                        *generator_args])
            assert code == 0
            outputs[(label, parallelism)] = out.read_bytes()
        assert outputs[(label, 1)] == outputs[(label, 8)], label

    first = build_index(docs, AnalyzerConfig()).to_bytes()
    second = build_index(list(docs), AnalyzerConfig()).to_bytes()
    assert first == second
    _pass("determinism (parallel expansion byte-identical, index bit-identical)")


ANTIQUE_DIR = os.environ.get("EXPANDIR_ANTIQUE_DIR")
MSMARCO_DIR = os.environ.get("EXPANDIR_MSMARCO_DIR")


@pytest.mark.skipif(not ANTIQUE_DIR, reason="EXPANDIR_ANTIQUE_DIR not set")
def test_ingestion_fidelity_antique():
    docs = load_collection_tsv(os.path.join(ANTIQUE_DIR, "collection.tsv"))
    queries = load_queries_tsv(os.path.join(ANTIQUE_DIR, "queries.tsv"))
    qrels = load_qrels(os.path.join(ANTIQUE_DIR, "qrels.txt"))
    assert len(docs) == 403_666
    assert len(queries) == 200
    assert qrels.num_pairs() == 6_589
    _pass("ingestion fidelity (ANTIQUE counts)")


@pytest.mark.skipif(not MSMARCO_DIR, reason="EXPANDIR_MSMARCO_DIR not set")
def test_ingestion_fidelity_msmarco():
    docs = load_collection_tsv(os.path.join(MSMARCO_DIR, "collection.tsv"))
    queries = load_queries_tsv(os.path.join(MSMARCO_DIR, "queries.tsv"))
    qrels = load_qrels(os.path.join(MSMARCO_DIR, "qrels.txt"))
    assert len(docs) == 8_841_823
    assert len(queries) == 6_980
    assert qrels.num_pairs() == 59_273
    _pass("ingestion fidelity (MS MARCO counts)")
