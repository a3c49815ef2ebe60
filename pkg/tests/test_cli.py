import json

import pytest

import prp_sort
from prp_sort.cli import main


def write_config(tmp_path, **overrides):
    raw = {
        "dataset": {"synthetic": {"queries": 2, "n": 8}},
        "oracle": {"kind": "score"},
        "k": 3,
        "seed": 5,
        "algorithms": [
            {"algorithm": "heapsort"},
            {"algorithm": "quicksort", "pivot": "middle", "batch_size": 2},
        ],
    }
    raw.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return str(path)


class TestVersion:
    def test_prints_package_version(self, capsys):
        assert main(["version"]) == 0
        assert capsys.readouterr().out.strip() == prp_sort.__version__


class TestSynth:
    def test_writes_dataset_json(self, tmp_path, capsys):
        out = tmp_path / "data.json"
        assert main(["synth", "--queries", "2", "--n", "5", "--seed", "3", "--out", str(out)]) == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert len(payload["queries"]) == 2
        first = payload["queries"][0]
        assert first["qid"] == "q0001"
        assert len(first["candidates"]) == 5
        assert len(first["scores"]) == 5
        assert set(first["grades"]) == set(first["candidates"])

    def test_deterministic_bytes_for_fixed_seed(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["synth", "--queries", "2", "--n", "6", "--seed", "9", "--out", str(a)])
        main(["synth", "--queries", "2", "--n", "6", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_sizes_exit_nonzero(self, tmp_path, capsys):
        out = tmp_path / "x.json"
        assert main(["synth", "--queries", "0", "--n", "5", "--out", str(out)]) == 2
        assert "error:" in capsys.readouterr().err


class TestRun:
    def test_runs_config_and_writes_csv(self, tmp_path, capsys):
        config = write_config(tmp_path)
        out = tmp_path / "report.csv"
        assert main(["run", "--config", config, "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith("kind,algorithm")
        assert "heapsort" in text
        assert "quicksort (middle, b=2)" in text
        stdout = capsys.readouterr().out
        assert "wrote csv report" in stdout
        assert "heapsort" in stdout  # summary table

    def test_repeat_runs_emit_identical_bytes(self, tmp_path):
        config = write_config(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["run", "--config", config, "--out", str(a)]) == 0
        assert main(["run", "--config", config, "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_emission(self, tmp_path, capsys):
        config = write_config(tmp_path)
        assert main(["run", "--config", config, "--out", "-"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("kind,algorithm")

    def test_algo_override_replaces_matrix(self, tmp_path):
        config = write_config(tmp_path)
        out = tmp_path / "r.csv"
        assert main(["run", "--config", config, "--algo", "bubblesort", "--cache", "--out", str(out)]) == 0
        text = out.read_text(encoding="utf-8")
        assert "bubblesort (cached)" in text
        assert "heapsort" not in text

    def test_k_and_format_overrides(self, tmp_path):
        config = write_config(tmp_path)
        out = tmp_path / "r.jsonl"
        assert main(
            ["run", "--config", config, "--k", "2", "--format", "jsonl", "--out", str(out)]
        ) == 0
        records = [json.loads(line) for line in out.read_text(encoding="utf-8").splitlines()]
        assert all(r["k"] == 2 for r in records)
        assert records[0]["kind"] == "query"

    def test_quicksort_flags(self, tmp_path):
        config = write_config(tmp_path)
        out = tmp_path / "r.csv"
        assert (
            main(
                [
                    "run",
                    "--config",
                    config,
                    "--algo",
                    "quicksort",
                    "--pivot",
                    "random",
                    "--batch-size",
                    "128",
                    "--no-partial",
                    "--out",
                    str(out),
                ]
            )
            == 0
        )
        assert "quicksort (random, b=128, full)" in out.read_text(encoding="utf-8")

    def test_invalid_config_exits_nonzero(self, tmp_path, capsys):
        config = write_config(tmp_path, algorithms=[{"algorithm": "mergesort"}])
        assert main(["run", "--config", config]) == 2
        assert "error:" in capsys.readouterr().err

    def test_invalid_override_combination_exits_nonzero(self, tmp_path, capsys):
        config = write_config(tmp_path)
        code = main(["run", "--config", config, "--algo", "heapsort", "--batch-size", "4"])
        assert code == 2
        assert "batch" in capsys.readouterr().err

    def test_missing_config_file_exits_nonzero(self, tmp_path, capsys):
        assert main(["run", "--config", str(tmp_path / "nope.json")]) == 2
        assert "io error" in capsys.readouterr().err
