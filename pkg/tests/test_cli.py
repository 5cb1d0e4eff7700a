"""End-to-end CLI tests run through the main() entry point."""

import json

import pytest

from noisemod.cli import main
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]

CANONICAL_CFG = str(REPO_ROOT / "configs" / "canonical.json")
LITERAL_CFG = str(REPO_ROOT / "configs" / "paper_literal.json")


class TestDerive:
    def test_json_output_default_config(self, capsys):
        assert main(["derive", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["means"] == [0.006, 0.025, 0.101, 0.12000000000000001]
        assert payload["variances"] == [2.1e-9, 2.5e-9, 1.01e-8, 1.05e-8]
        assert payload["var_thresholds"] == [2.3e-9, 6.3e-9, 1.03e-8]
        assert payload["banks"]["kljn"]["mean_thresholds"] == []
        assert payload["banks"]["gqnm"]["var_thresholds"] == [3e-10]

    def test_config_file_matches_defaults(self, capsys):
        assert main(["derive", "--json", "--config", CANONICAL_CFG]) == 0
        from_file = json.loads(capsys.readouterr().out)
        assert main(["derive", "--json"]) == 0
        builtin = json.loads(capsys.readouterr().out)
        assert from_file == builtin

    def test_text_output(self, capsys):
        assert main(["derive"]) == 0
        out = capsys.readouterr().out
        assert "composite means" in out
        assert "kljn thresholds" in out

    def test_degenerate_config_exits_one(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({
            "explicit": {
                "sub0": {"m_L": 1.0, "m_H": 2.0, "var_0": 1.0, "var_1": 2.0},
                "sub1": {"m_L": 1.0, "m_H": 2.0, "var_0": 1.0, "var_1": 2.0},
            },
        }))
        assert main(["derive", "--config", str(path)]) == 1
        assert "coincident" in capsys.readouterr().err


class TestCheck:
    def test_canonical_margins_json(self, capsys):
        assert main(["check", "--n", "100", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["mean_ratio"] == pytest.approx(30.90, abs=0.05)
        assert report["mean_satisfied"] is True
        assert report["var_satisfied"] is False
        assert report["var_ratios"][0] == pytest.approx(0.206, abs=5e-3)
        assert report["formula_mode"] == "corrected"

    def test_fourth_moment_formula_selected(self, capsys):
        assert main(["check", "--n", "100", "--variance-formula", "paper", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["formula_mode"] == "paper"
        assert report["warnings"]

    def test_text_output(self, capsys):
        assert main(["check", "--n", "100"]) == 0
        out = capsys.readouterr().out
        assert "mean condition" in out
        assert "NOT satisfied" in out

    def test_unknown_config_key_exits_one(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"m_L0": 1e-3, "alhpa": 2}))
        assert main(["check", "--config", str(path)]) == 1
        assert "alhpa" in capsys.readouterr().err


class TestSimulate:
    def test_single_point_csv(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        code = main([
            "simulate", "--scheme", "kljn", "--n", "40", "--min-bits", "1000",
            "--seed", "3", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("scheme,variable,value,N,sigma_w,bits,errors,bep")
        assert len(lines) == 2
        assert lines[1].split(",")[0] == "kljn"

    def test_n_range_sweep(self, tmp_path):
        out = tmp_path / "run.csv"
        code = main([
            "simulate", "--scheme", "kljn", "--n", "40:100:15", "--min-bits", "1000",
            "--out", str(out),
        ])
        assert code == 0
        rows = out.read_text().splitlines()[1:]
        assert [r.split(",")[2] for r in rows] == ["40", "55", "70", "85", "100"]

    def test_sigma_sweep_json(self, tmp_path):
        out = tmp_path / "run.json"
        code = main([
            "simulate", "--scheme", "gqnm", "--n", "50", "--sigma-w", "1e-5:3e-5:1e-5",
            "--min-bits", "1000", "--format", "json", "--out", str(out),
        ])
        assert code == 0
        data = json.loads(out.read_text())
        assert [d["variable"] for d in data] == ["sigma_w"] * 3
        assert [d["N"] for d in data] == [50, 50, 50]

    def test_all_schemes_stdout(self, capsys):
        assert main(["simulate", "--n", "40", "--min-bits", "1000", "--seed", "5"]) == 0
        out = capsys.readouterr().out
        assert len(out.splitlines()) == 4  # header + 3 schemes

    def test_preflight_note_on_unsatisfied_margins(self, capsys):
        assert main(["simulate", "--scheme", "kljn", "--n", "40", "--min-bits", "1000"]) == 0
        assert "margins unsatisfied" in capsys.readouterr().err

    def test_double_sweep_rejected(self, capsys):
        code = main(["simulate", "--n", "40:100:15", "--sigma-w", "1e-5:3e-5:1e-5"])
        assert code == 1
        assert "one variable" in capsys.readouterr().err

    def test_bad_flag_value_exits_one(self, capsys):
        assert main(["simulate", "--fairness", "bogus"]) == 1

    def test_bad_range_exits_one(self, capsys):
        assert main(["simulate", "--n", "100:40:15"]) == 1

    def test_unwritable_output_exits_two(self, capsys):
        code = main([
            "simulate", "--scheme", "kljn", "--n", "40", "--min-bits", "1000",
            "--out", "/no-such-dir/run.csv",
        ])
        assert code == 2
        assert "no-such-dir" in capsys.readouterr().err

    def test_literal_config_runs(self, tmp_path):
        out = tmp_path / "run.csv"
        code = main([
            "simulate", "--scheme", "cgqnm", "--config", LITERAL_CFG, "--n", "40",
            "--min-bits", "1000", "--out", str(out),
        ])
        assert code == 0
        assert len(out.read_text().splitlines()) == 2
