import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from sentcomp import bws
from sentcomp.cli import atomic_write, main

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
STAMP = "2026-01-05T09:00:00Z"


def run_cli(*argv):
    """In-process invocation; returns the exit code."""
    return main([str(a) for a in argv])


def run_proc(*argv):
    return subprocess.run(
        [sys.executable, "-m", "sentcomp.cli", *map(str, argv)],
        capture_output=True,
        text=True,
        cwd=ROOT,
    )


@pytest.fixture
def terms_file(tmp_path):
    path = tmp_path / "terms.txt"
    path.write_text("".join(f"term{i:02d}\n" for i in range(12)))
    return path


@pytest.fixture
def design(tmp_path, terms_file):
    tuples_path = tmp_path / "tuples.jsonl"
    assert run_cli("tuples", "--terms", terms_file, "--k", 4,
                   "--out", tuples_path) == 0
    responses_path = tmp_path / "responses.jsonl"
    tuples = bws.load_tuples(tuples_path)
    with open(responses_path, "w", encoding="utf-8") as fh:
        for t in tuples:
            ranked = sorted(t.items)
            resp = bws.BwsResponse(t.id, "a1", ranked[0], ranked[-1], STAMP)
            fh.write(bws.response_to_json(resp) + "\n")
    return tuples_path, responses_path


class TestEntryAndErrors:
    def test_module_entry_point(self, tmp_path, terms_file):
        out = tmp_path / "t.jsonl"
        proc = run_proc("tuples", "--terms", terms_file, "--out", out)
        assert proc.returncode == 0
        assert out.exists()

    def test_missing_command(self):
        assert run_cli() == 1

    def test_unknown_flag(self, terms_file):
        proc = run_proc("tuples", "--terms", terms_file, "--bogus", 3)
        assert proc.returncode == 1
        assert "bogus" in proc.stderr

    def test_missing_file(self, tmp_path):
        assert run_cli("tuples", "--terms", tmp_path / "absent.txt") == 1

    def test_unexpected_error_is_exit_2(self, tmp_path):
        # A directory where a file is expected raises outside the expected
        # error families.
        assert run_cli("tuples", "--terms", tmp_path) == 2

    def test_logs_go_to_stderr_only(self, tmp_path, terms_file):
        proc = run_proc("-v", "tuples", "--terms", terms_file)
        assert proc.returncode == 0
        for line in proc.stdout.splitlines():
            json.loads(line)
        assert "tuples for" in proc.stderr


class TestTuples:
    def test_deterministic_output(self, tmp_path, terms_file):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_cli("tuples", "--terms", terms_file, "--out", a) == 0
        assert run_cli("tuples", "--terms", terms_file, "--out", b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_output(self, tmp_path, terms_file):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_cli("tuples", "--terms", terms_file, "--out", a)
        run_cli("tuples", "--terms", terms_file, "--seed", 8, "--out", b)
        assert a.read_bytes() != b.read_bytes()

    def test_appearances_alias(self, tmp_path, terms_file):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run_cli("tuples", "--terms", terms_file, "--k", 4, "--out", a)
        run_cli("tuples", "--terms", terms_file, "--appearances", 4, "--out", b)
        assert a.read_bytes() == b.read_bytes()
        assert len(a.read_text().splitlines()) == 12

    def test_lines_are_tuple_objects(self, tmp_path, terms_file):
        out = tmp_path / "t.jsonl"
        run_cli("tuples", "--terms", terms_file, "--out", out)
        for line in out.read_text().splitlines():
            obj = json.loads(line)
            assert set(obj) == {"id", "items"}
            assert len(obj["items"]) == 4


class TestExtract:
    def test_finds_planted_candidates(self, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text(
            "a bitter win today\n"
            "the win was bitter again\n"
            "a bitter win for them\n"
        )
        pos_lex = tmp_path / "pos.tsv"
        pos_lex.write_text("win\tpositive\n")
        neg_lex = tmp_path / "neg.tsv"
        neg_lex.write_text("bitter\tnegative\n")
        out = tmp_path / "cands.txt"
        code = run_cli(
            "extract", "--corpus", corpus, "--lexicons", pos_lex, neg_lex,
            "--n", 2, "--out", out,
        )
        assert code == 0
        assert out.read_text() == "bitter win\n"

    def test_stdout_default(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("bitter win\n")
        lex = tmp_path / "lex.tsv"
        lex.write_text("win\tpositive\nbitter\tnegative\n")
        assert run_cli("extract", "--corpus", corpus, "--lexicons", lex, "--n", 2) == 0
        assert capsys.readouterr().out == "bitter win\n"


class TestScoreBws:
    def test_tsv_output(self, design, capsys):
        tuples_path, responses_path = design
        code = run_cli("score-bws", "--tuples", tuples_path,
                       "--responses", responses_path)
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 12
        scores = []
        for line in lines:
            term, score = line.split("\t")
            assert term.startswith("term")
            scores.append(float(score))
        assert scores == sorted(scores, reverse=True)

    def test_json_matches_library(self, design, tmp_path):
        tuples_path, responses_path = design
        out = tmp_path / "scores.json"
        code = run_cli("score-bws", "--tuples", tuples_path,
                       "--responses", responses_path,
                       "--format", "json", "--out", out)
        assert code == 0
        table = bws.score(
            bws.load_tuples(tuples_path), bws.load_responses(responses_path)
        )
        assert out.read_text() == table.to_json()

    def test_empty_responses_fail(self, design, tmp_path):
        tuples_path, _ = design
        empty = tmp_path / "none.jsonl"
        empty.write_text("")
        assert run_cli("score-bws", "--tuples", tuples_path,
                       "--responses", empty) == 1

    def test_foreign_response_fails(self, design, tmp_path):
        tuples_path, _ = design
        bad = tmp_path / "bad.jsonl"
        bad.write_text(json.dumps({
            "tuple_id": "t9999", "annotator": "a1", "best": "x", "worst": "y",
            "timestamp": STAMP,
        }) + "\n")
        assert run_cli("score-bws", "--tuples", tuples_path,
                       "--responses", bad) == 1


class TestAgreement:
    def test_unanimous_single_annotator(self, design, capsys):
        tuples_path, responses_path = design
        assert run_cli("agreement", "--tuples", tuples_path,
                       "--responses", responses_path) == 0
        assert capsys.readouterr().out == "1.0000\n"


class TestMinePatterns:
    def test_fixture_yields_nine_patterns(self, capsys):
        code = run_cli(
            "mine-patterns", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
            "--min-support", 10, "--min-rate", 0.5,
            "--neutral-threshold", 0.05,
        )
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "lhs\trhs\toccurrence_rate\tsupport"
        assert len(lines) == 10
        assert "neg verb + pos noun\tnegative\t0.82\t17" in lines

    def test_text_format(self, capsys):
        code = run_cli(
            "mine-patterns", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
            "--min-support", 10, "--min-rate", 0.5,
            "--neutral-threshold", 0.05, "--format", "text",
        )
        assert code == 0
        text = capsys.readouterr().out
        assert "pos adv + neg verb" in text


class TestEval:
    def test_rule_systems_table(self, tmp_path):
        out = tmp_path / "table.tsv"
        runs_csv = tmp_path / "runs.csv"
        code = run_cli(
            "eval", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv", "--n", 2,
            "--systems", "majority,last,most-polar",
            "--folds", 5, "--repeats", 1,
            "--out", out, "--runs-csv", runs_csv,
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "system\tacc-2gr\tr-2gr"
        assert len(lines) == 4
        names = [line.split("\t")[0] for line in lines[1:]]
        assert names == ["majority", "last-unigram", "most-polar"]
        for line in lines[1:]:
            acc = float(line.split("\t")[1])
            assert 40.0 <= acc <= 80.0
        assert len(runs_csv.read_text().splitlines()) == 1 + 3 * 5

    def test_json_summary(self, tmp_path):
        summary = tmp_path / "summary.json"
        code = run_cli(
            "eval", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv", "--n", 3,
            "--systems", "majority", "--folds", 5, "--repeats", 1,
            "--out", tmp_path / "t.tsv", "--json", summary,
        )
        assert code == 0
        obj = json.loads(summary.read_text())
        assert obj["systems"][0]["system"] == "majority"
        assert obj["systems"][0]["metrics"]["binary-3"]["runs"] == 5

    def test_unknown_system(self):
        assert run_cli(
            "eval", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
            "--systems", "perceptron",
        ) == 1


class TestPredict:
    def test_rule_system_covers_both_orders(self, tmp_path):
        out = tmp_path / "preds.tsv"
        code = run_cli(
            "predict", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
            "--system", "most-polar", "--out", out,
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "term\tgold\tpredicted\tpredicted_polarity"
        assert len(lines) == 1 + 311 + 265
        cells = lines[1].split("\t")
        assert cells[3] in ("positive", "negative")
        float(cells[1]), float(cells[2])

    def test_save_and_reapply_model(self, tmp_path):
        model = tmp_path / "model.json"
        direct = tmp_path / "direct.tsv"
        code = run_cli(
            "predict", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv", "--n", 2,
            "--system", "svm:score", "--task", "regression",
            "--C", 10, "--save-model", model, "--out", direct,
        )
        assert code == 0
        reapplied = tmp_path / "reapplied.tsv"
        code = run_cli(
            "predict", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv", "--n", 2,
            "--model", model, "--out", reapplied,
        )
        assert code == 0
        assert reapplied.read_bytes() == direct.read_bytes()

    def test_save_model_needs_svm(self, tmp_path):
        assert run_cli(
            "predict", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
            "--system", "majority", "--save-model", tmp_path / "m.json",
        ) == 1

    def test_model_and_system_are_exclusive(self, tmp_path):
        base = [
            "predict", "--lexicon", DATA / "scl_opp.tsv",
            "--pos", DATA / "scl_opp_pos.tsv",
        ]
        assert run_cli(*base) == 1
        assert run_cli(*base, "--system", "majority",
                       "--model", tmp_path / "m.json") == 1


class TestConfig:
    def test_config_supplies_defaults_and_flags_win(self, tmp_path, terms_file):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"k": 4, "terms": str(terms_file)}))
        from_config = tmp_path / "via_config.jsonl"
        assert run_cli("--config", config, "tuples", "--out", from_config) == 0
        assert len(from_config.read_text().splitlines()) == 12

        overridden = tmp_path / "flag_wins.jsonl"
        assert run_cli("--config", config, "tuples", "--k", 8,
                       "--out", overridden) == 0
        assert len(overridden.read_text().splitlines()) == 24

    def test_bad_json(self, tmp_path, terms_file):
        config = tmp_path / "config.json"
        config.write_text("{not json")
        assert run_cli("--config", config, "tuples", "--terms", terms_file) == 1

    def test_unknown_key(self, tmp_path, terms_file):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"quota": 5}))
        assert run_cli("--config", config, "tuples", "--terms", terms_file) == 1

    def test_config_without_subcommand(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text("{}")
        assert run_cli("--config", config) == 1

    def test_missing_config_path(self):
        assert run_cli("--config") == 1


class TestAtomicWrite:
    def test_writes_and_replaces(self, tmp_path):
        target = tmp_path / "out.txt"
        atomic_write(target, "one\n")
        atomic_write(target, "two\n")
        assert target.read_text() == "two\n"

    def test_failure_leaves_no_trace(self, tmp_path, monkeypatch):
        target = tmp_path / "out.txt"

        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            atomic_write(target, "data")
        assert not target.exists()
        assert list(tmp_path.iterdir()) == []

    def test_failure_preserves_previous_content(self, tmp_path, monkeypatch):
        target = tmp_path / "out.txt"
        atomic_write(target, "original\n")
        monkeypatch.setattr(os, "replace", lambda s, d: (_ for _ in ()).throw(OSError()))
        with pytest.raises(OSError):
            atomic_write(target, "replacement\n")
        assert target.read_text() == "original\n"
