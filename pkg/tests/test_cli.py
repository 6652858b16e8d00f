import json

import numpy as np
import pytest

from postulate_sim import algorithms as alg
from postulate_sim import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTeleportCommand:
    def test_lueders_success(self, capsys):
        code, out, _ = run_cli(
            capsys, "teleport", "--mode", "lueders", "--alpha", "0.6,0",
            "--beta", "0.8,0", "--trials", "200", "--seed", "7",
        )
        assert code == 0
        report = json.loads(out)
        assert report["schema"] == "postulate-sim/1"
        assert report["blocked"] is None
        for p in report["born_probabilities"].values():
            assert p == pytest.approx(0.25, abs=1e-10)
        for trial in report["outcomes"]:
            assert trial["fidelity"] == pytest.approx(1.0, abs=1e-10)

    def test_von_neumann_blocked_exit_2(self, capsys):
        code, out, _ = run_cli(
            capsys, "teleport", "--mode", "von-neumann", "--alpha", "0.6,0",
            "--beta", "0.8,0", "--trials", "3",
        )
        assert code == 2
        report = json.loads(out)
        assert report["blocked"]["multiplicities"] == [2, 2, 2, 2]
        assert all(not t["determined"] for t in report["outcomes"])

    def test_renormalization_warning(self, capsys):
        code, _, err = run_cli(capsys, "teleport", "--alpha", "3,0", "--beta", "4,0")
        assert code == 0
        assert "renormalizing" in err

    def test_frequencies_converge(self, capsys):
        code, out, _ = run_cli(
            capsys, "teleport", "--alpha", "0.6,0", "--beta", "0.8,0",
            "--trials", "10000", "--seed", "3",
        )
        report = json.loads(out)
        for freq in report["frequencies"].values():
            assert abs(freq - 0.25) < 0.02


class TestDeterminism:
    @pytest.mark.parametrize("argv", [
        ("teleport", "--alpha", "0.6,0", "--beta", "0,0.8", "--trials", "50", "--seed", "11"),
        ("grover", "--n", "3", "--marked", "2,5", "--trials", "20", "--seed", "4"),
        ("measure", "--observable", "x", "--alpha", "0.6,0", "--beta", "0.8,0",
         "--trials", "30", "--seed", "9"),
        ("dj", "--n", "4", "--kind", "balanced", "--seed", "2", "--trials", "5"),
    ])
    def test_byte_identical_reports(self, capsys, argv):
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_json_round_trips(self, capsys):
        _, out, _ = run_cli(capsys, "grover", "--n", "2", "--marked", "1", "--trials", "5")
        report = json.loads(out)
        assert json.loads(json.dumps(report, sort_keys=True)) == report


class TestAlgorithmCommands:
    def test_dj_constant(self, capsys):
        code, out, _ = run_cli(capsys, "dj", "--n", "3", "--kind", "constant", "--value", "1")
        assert code == 0
        report = json.loads(out)
        assert report["verdicts"] == {"constant": 1}
        assert report["zero_probability"] == pytest.approx(1.0, abs=1e-10)

    def test_dj_oracle_file(self, capsys, tmp_path):
        oracle = alg.balanced_oracle(3, np.random.default_rng(5))
        path = tmp_path / "dj.txt"
        alg.save_oracle(oracle, path)
        code, out, _ = run_cli(capsys, "dj", "--oracle", str(path), "--trials", "3")
        assert code == 0
        report = json.loads(out)
        assert report["verdicts"] == {"balanced": 3}

    def test_simon_oracle_file(self, capsys, tmp_path):
        oracle = alg.simon_oracle(3, 0b101, np.random.default_rng(6))
        path = tmp_path / "s101.txt"
        alg.save_oracle(oracle, path)
        code, out, _ = run_cli(capsys, "simon", "--oracle", str(path), "--seed", "1")
        assert code == 0
        report = json.loads(out)
        assert report["hidden_period"] == "101"
        assert report["outcomes"][0]["period"] == "101"
        assert report["all_recovered"] is True

    def test_simon_generated(self, capsys):
        code, out, _ = run_cli(capsys, "simon", "--n", "4", "--period", "1001", "--trials", "3")
        assert code == 0
        assert json.loads(out)["all_recovered"] is True

    def test_grover(self, capsys):
        code, out, _ = run_cli(capsys, "grover", "--n", "2", "--marked", "3", "--trials", "10")
        assert code == 0
        report = json.loads(out)
        assert report["marked_probability"] == pytest.approx(1.0, abs=1e-10)
        assert report["hit_rate"] == 1.0

    def test_measure(self, capsys):
        code, out, _ = run_cli(
            capsys, "measure", "--observable", "z", "--alpha", "0.6,0", "--beta", "0.8,0",
            "--trials", "100", "--seed", "0",
        )
        assert code == 0
        report = json.loads(out)
        assert report["born_probabilities"]["-1.0"] == pytest.approx(0.64, abs=1e-10)
        assert report["born_probabilities"]["1.0"] == pytest.approx(0.36, abs=1e-10)

    def test_semantics_independent_outcomes(self, capsys):
        outs = {}
        for mode in ("lueders", "von-neumann"):
            _, out, _ = run_cli(capsys, "grover", "--n", "3", "--marked", "5",
                                "--mode", mode, "--trials", "25", "--seed", "13")
            outs[mode] = json.loads(out)["outcomes"]
        assert outs["lueders"] == outs["von-neumann"]


class TestErrors:
    def test_usage_error_exit_1(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["teleport", "--mode", "bogus"])
        assert exc.value.code == 1

    def test_missing_oracle_exit_1(self, capsys):
        assert cli.main(["simon", "--oracle", "/nonexistent/path.txt"]) == 1

    def test_invalid_oracle_file_exit_1(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("garbage\n")
        assert cli.main(["dj", "--oracle", str(path)]) == 1

    def test_dj_without_inputs_exit_1(self, capsys):
        assert cli.main(["dj"]) == 1


class TestEmitReport:
    def test_empty_outcomes_valid_json(self):
        report = {
            "schema": cli.SCHEMA,
            "version": "0.1.0",
            "config": {"command": "teleport", "mode": "lueders", "seed": 0, "trials": 0},
            "outcomes": [],
        }
        parsed = json.loads(cli.emit_report(report, "json"))
        assert parsed["outcomes"] == []

    def test_round_trip_identity(self):
        report = {
            "schema": cli.SCHEMA,
            "version": "0.1.0",
            "config": {"command": "grover", "mode": "lueders", "seed": 5, "trials": 2},
            "outcomes": [{"found": 3, "hit": True}],
            "marked_probability": 0.9613189697265625,
        }
        assert json.loads(cli.emit_report(report, "json")) == report


class TestTextFormat:
    def test_one_screen_summary(self, capsys):
        code, out, _ = run_cli(
            capsys, "teleport", "--alpha", "0.6,0", "--beta", "0.8,0",
            "--trials", "50", "--format", "text",
        )
        assert code == 0
        assert "teleport" in out
        assert len(out.splitlines()) < 25
