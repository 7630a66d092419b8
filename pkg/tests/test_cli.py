import csv
import json

import numpy as np
import pytest

from lyricstats.cli import main
from lyricstats.resources import mini_corpus_path
from tests.conftest import jsonl_row, random_table, write_jsonl


@pytest.fixture()
def mini_cache(tmp_path):
    out = tmp_path / "build"
    assert main(["ingest", "--input", mini_corpus_path(), "--format", "csv", "--out", str(out)]) == 0
    return out / "corpus.cache"


class TestIngestCommand:
    def test_outputs_written(self, tmp_path):
        src = tmp_path / "songs.jsonl"
        write_jsonl(src, [jsonl_row(f"s{i}") for i in range(3)])
        out = tmp_path / "build"
        assert main(["ingest", "--input", str(src), "--out", str(out)]) == 0
        assert (out / "corpus.cache").exists()
        assert (out / "rejects.jsonl").exists()
        assert (out / "ingest.config.json").exists()

    def test_unreadable_path_exit_1(self, tmp_path):
        assert main(["ingest", "--input", str(tmp_path / "nope.jsonl"), "--out", str(tmp_path / "o")]) == 1

    def test_majority_malformed_exit_2_partial_cache(self, tmp_path):
        src = tmp_path / "songs.jsonl"
        rows = [jsonl_row("s1"), jsonl_row("s2")]
        rows += [dict(jsonl_row(f"b{i}"), lyrics="") for i in range(3)]
        write_jsonl(src, rows)
        out = tmp_path / "build"
        assert main(["ingest", "--input", str(src), "--out", str(out)]) == 2
        assert (out / "corpus.cache").exists()
        assert len((out / "rejects.jsonl").read_text().splitlines()) == 3


class TestStyleCommand:
    def test_four_csvs(self, tmp_path, mini_cache):
        out = tmp_path / "style"
        assert main(["style", "--cache", str(mini_cache), "--out", str(out), "--words", "rock,blues"]) == 0
        for name in ("per_song.csv", "aggregate.csv", "top_words.csv", "rank_series.csv"):
            assert (out / name).exists()

    def test_missing_cache_exit_1(self, tmp_path):
        assert main(["style", "--cache", str(tmp_path / "no.cache"), "--out", str(tmp_path / "o")]) == 1

    def test_byte_identical_reruns(self, tmp_path, mini_cache):
        contents = []
        for name in ("s1", "s2"):
            out = tmp_path / name
            main(["style", "--cache", str(mini_cache), "--out", str(out), "--words", "rock,blues"])
            contents.append(
                tuple((out / f).read_bytes() for f in ("per_song.csv", "aggregate.csv", "top_words.csv", "rank_series.csv"))
            )
        assert contents[0] == contents[1]

    def test_rank_series_only_requested_words(self, tmp_path, mini_cache):
        out = tmp_path / "style"
        main(["style", "--cache", str(mini_cache), "--out", str(out), "--words", "rock,blues"])
        with open(out / "rank_series.csv") as fh:
            words = {row["word"] for row in csv.DictReader(fh)}
        assert words <= {"rock", "blues"}

    def test_top_k_year_cohort_row_count(self, tmp_path, mini_cache):
        out = tmp_path / "style"
        main(
            ["style", "--cache", str(mini_cache), "--out", str(out),
             "--top-k", "5", "--year", "1965", "--cohort", "popular"]
        )
        with open(out / "top_words.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 5
        assert {r["year"] for r in rows} == {"1965"}


class TestTrainCommand:
    def test_deterministic_byte_identical(self, tmp_path, mini_cache):
        files = []
        for name in ("v1.txt", "v2.txt"):
            out = tmp_path / name
            code = main(
                ["train", "--cache", str(mini_cache), "--out", str(out),
                 "--dim", "8", "--epochs", "1", "--min-count", "1",
                 "--seed", "7", "--deterministic"]
            )
            assert code == 0
            files.append(out.read_bytes())
        assert files[0] == files[1]

    def test_seed_mandatory(self, tmp_path, mini_cache):
        assert main(["train", "--cache", str(mini_cache), "--out", str(tmp_path / "v.txt")]) == 1


class TestWeatCommand:
    def _vector_file(self, tmp_path, words, dim=6, seed=0):
        from lyricstats.embeddings import save_vectors

        table = random_table(sorted(words), dim, np.random.default_rng(seed))
        path = tmp_path / "vecs.txt"
        save_vectors(table, str(path))
        return path

    def test_exact_mode_on_small_lists(self, tmp_path):
        tests = [
            {
                "name": "tiny",
                "targets_x": ["x1", "x2", "x3"],
                "targets_y": ["y1", "y2", "y3"],
                "attributes_a": ["a1", "a2"],
                "attributes_b": ["b1", "b2"],
            }
        ]
        test_file = tmp_path / "tests.json"
        test_file.write_text(json.dumps(tests))
        words = {w for t in tests for k in ("targets_x", "targets_y", "attributes_a", "attributes_b") for w in t[k]}
        vecs = self._vector_file(tmp_path, words)
        out = tmp_path / "weat"
        assert main(["weat", "--vectors", str(vecs), "--tests", str(test_file), "--out", str(out), "--exact"]) == 0
        with open(out / "weat_results.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["p_method"] == "exact"

    def test_bundled_battery_eight_rows(self, tmp_path):
        from lyricstats.weat import load_battery
        from lyricstats.resources import default_battery_path

        tests = load_battery(default_battery_path())
        words = {w for t in tests for w in (*t.targets_x, *t.targets_y, *t.attributes_a, *t.attributes_b)}
        vecs = self._vector_file(tmp_path, words)
        out = tmp_path / "weat"
        code = main(
            ["weat", "--vectors", str(vecs), "--out", str(out), "--mc-samples", "1000", "--seed", "3"]
        )
        assert code == 0
        with open(out / "weat_results.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 8

    def test_underfilled_test_still_exit_0(self, tmp_path):
        from lyricstats.weat import load_battery
        from lyricstats.resources import default_battery_path

        tests = load_battery(default_battery_path())
        words = {w for t in tests for w in (*t.targets_x, *t.targets_y, *t.attributes_a, *t.attributes_b)}
        words -= set(tests[2].targets_x)
        vecs = self._vector_file(tmp_path, words)
        out = tmp_path / "weat"
        code = main(
            ["weat", "--vectors", str(vecs), "--out", str(out), "--mc-samples", "500", "--seed", "3"]
        )
        assert code == 0
        with open(out / "weat_results.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert any(r["error"] for r in rows) and sum(1 for r in rows if not r["error"]) == 7


class TestMisc:
    def test_version(self, capsys):
        assert main(["version"]) == 0
        from lyricstats import __version__

        assert capsys.readouterr().out.strip() == __version__

    def test_config_file_defaults_with_flag_override(self, tmp_path, mini_cache):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"top_k": 3, "cohort": "popular"}))
        out = tmp_path / "style"
        main(
            ["--config", str(cfg), "style", "--cache", str(mini_cache), "--out", str(out), "--year", "1965"]
        )
        with open(out / "top_words.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 3
