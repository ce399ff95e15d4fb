import logging
import random

import pytest

from expandir.corpus import (
    Document,
    ExpandedDocument,
    FormatError,
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


class TestCollectionTsv:
    def test_single_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("d1\thello world\n", encoding="utf-8")
        assert load_collection_tsv(path) == [Document("d1", "hello world")]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("", encoding="utf-8")
        assert load_collection_tsv(path) == []

    def test_missing_tab_names_line(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("d0\tok\nd1\n", encoding="utf-8")
        with pytest.raises(FormatError, match=":2"):
            load_collection_tsv(path)

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("d1\ta\nd1\tb\n", encoding="utf-8")
        with pytest.raises(FormatError, match="duplicate"):
            load_collection_tsv(path)

    def test_empty_text_tolerated(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("d1\t\n", encoding="utf-8")
        assert load_collection_tsv(path) == [Document("d1", "")]

    def test_text_may_contain_tabs(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("d1\ta\tb\n", encoding="utf-8")
        assert load_collection_tsv(path) == [Document("d1", "a\tb")]


class TestQueriesTsv:
    def test_single(self, tmp_path):
        path = tmp_path / "q.tsv"
        path.write_text("q7\twhy is the sky blue\n", encoding="utf-8")
        assert load_queries_tsv(path) == [Query("q7", "why is the sky blue")]

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "q.tsv"
        path.write_text("q1\ta\nq1\tb\n", encoding="utf-8")
        with pytest.raises(FormatError, match="duplicate"):
            load_queries_tsv(path)

    def test_200_lines(self, tmp_path):
        path = tmp_path / "q.tsv"
        path.write_text("".join(f"q{i}\ttext {i}\n" for i in range(200)), encoding="utf-8")
        assert len(load_queries_tsv(path)) == 200


class TestQrels:
    def test_basic(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("q1 0 d1 3\n", encoding="utf-8")
        qrels = load_qrels(path)
        assert qrels.grade("q1", "d1") == 3
        assert qrels.grade("q1", "dX") == 0

    def test_empty(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("", encoding="utf-8")
        assert load_qrels(path).num_pairs() == 0

    def test_duplicate_keeps_last_and_warns(self, tmp_path, caplog):
        path = tmp_path / "qrels.txt"
        path.write_text("q1 0 d1 1\nq1 0 d1 2\n", encoding="utf-8")
        with caplog.at_level(logging.WARNING):
            qrels = load_qrels(path)
        assert qrels.grade("q1", "d1") == 2
        assert qrels.num_pairs() == 1
        assert any("duplicate" in r.message for r in caplog.records)

    def test_non_integer_grade(self, tmp_path):
        path = tmp_path / "qrels.txt"
        path.write_text("q1 0 d1 high\n", encoding="utf-8")
        with pytest.raises(FormatError, match="non-integer"):
            load_qrels(path)


class TestRunFile:
    def test_exact_line(self, tmp_path):
        path = tmp_path / "run.txt"
        write_run([RunEntry("q1", "d1", 1, 0.5, "udeg")], path)
        assert path.read_text(encoding="utf-8") == "q1 Q0 d1 1 0.500000 udeg\n"

    def test_rank_gap_rejected(self, tmp_path):
        entries = [RunEntry("q1", "d1", 1, 0.5, "t"), RunEntry("q1", "d2", 3, 0.4, "t")]
        with pytest.raises(ValueError, match="rank"):
            write_run(entries, tmp_path / "run.txt")

    def test_score_order_rejected(self, tmp_path):
        entries = [RunEntry("q1", "d1", 1, 0.5, "t"), RunEntry("q1", "d2", 2, 0.6, "t")]
        with pytest.raises(ValueError, match="score"):
            write_run(entries, tmp_path / "run.txt")

    def test_roundtrip_random_entries(self, tmp_path):
        rng = random.Random(42)
        entries = []
        for q in range(20):
            # scores representable at 6 decimal places, non-increasing
            scores = sorted((rng.randrange(-(10**6), 10**6) / 1e6 for _ in range(50)), reverse=True)
            for rank, score in enumerate(scores, start=1):
                entries.append(RunEntry(f"q{q}", f"d{rank}", rank, score, "tag"))
        path = tmp_path / "run.txt"
        write_run(entries, path)
        assert read_run(path) == entries


class TestExpandedJsonl:
    def test_exact_line(self, tmp_path):
        path = tmp_path / "x.jsonl"
        write_expanded_jsonl([ExpandedDocument("d1", "cat", ("feline pet",))], path)
        assert path.read_text(encoding="utf-8") == (
            '{"id":"d1","contents":"cat","generated":["feline pet"]}\n'
        )

    def test_empty_generated(self, tmp_path):
        path = tmp_path / "x.jsonl"
        write_expanded_jsonl([ExpandedDocument("d1", "cat", ())], path)
        assert '"generated":[]' in path.read_text(encoding="utf-8")

    def test_roundtrip_random(self, tmp_path):
        rng = random.Random(9)
        vocab = ["cat", "chat", "näive", "запрос", "x y", ""]
        docs = [
            ExpandedDocument(
                f"d{i}",
                " ".join(rng.choice(vocab) for _ in range(rng.randrange(0, 6))),
                tuple(rng.choice(vocab) for _ in range(rng.randrange(0, 5))),
            )
            for i in range(200)
        ]
        path = tmp_path / "x.jsonl"
        write_expanded_jsonl(docs, path)
        assert read_expanded_jsonl(path) == docs

    def test_malformed_line_number(self, tmp_path):
        path = tmp_path / "x.jsonl"
        path.write_text('{"id":"d1","contents":"a","generated":[]}\nnot json\n', encoding="utf-8")
        with pytest.raises(FormatError, match=":2"):
            read_expanded_jsonl(path)

    def test_combined_text_prepends_generated(self):
        doc = ExpandedDocument("d", "base", ("one", "two"))
        assert doc.combined_text() == "one two base"
        assert ExpandedDocument("d", "base", ()).combined_text() == "base"
