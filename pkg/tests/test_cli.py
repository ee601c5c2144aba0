import json
import subprocess
import sys
from pathlib import Path

import pytest

from xprob import io
from xprob.cli import main

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def run(tmp_path, *args):
    return main([*args[:1], "--config", str(CONFIGS / args[1]), "--out", str(tmp_path), *args[2:]])


class TestCommands:
    def test_validate(self, tmp_path, capsys):
        assert run(tmp_path, "validate", "measure.json") == 0
        assert "iii* residual 0" in capsys.readouterr().out
        assert io.read_json(tmp_path / "validation.json")["ok"]

    def test_validate_failure(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"labels": [1, 2, 3, 4], "atoms": [0.5, 0.6, -0.2, -0.1]}))
        assert main(["validate", "--config", str(bad), "--out", str(tmp_path)]) == 2
        assert main(["validate", "--config", str(bad), "--out", str(tmp_path), "--relaxed"]) == 0

    def test_discover(self, tmp_path, capsys):
        assert run(tmp_path, "discover", "discover.json", "--seed", "0") == 0
        assert "scenario=full_space" in capsys.readouterr().out
        rows = io.load_trajectory_csv(tmp_path / "trajectory.csv")
        assert rows[-1]["d_etv_to_limit"] == 0.0

    def test_discover_json(self, tmp_path):
        assert run(tmp_path, "discover", "discover.json", "--format", "json") == 0
        assert io.load_trajectory_json(tmp_path / "trajectory.json")["steps"][-1]["d_etv_to_limit"] == 0.0

    def test_restart(self, tmp_path):
        assert run(tmp_path, "discover", "restart.json") == 3

    def test_envelopes(self, tmp_path, capsys):
        assert run(tmp_path, "envelopes", "credal.json") == 0
        assert "conjugacy" in capsys.readouterr().out
        assert len(io.read_csv(tmp_path / "envelope.csv")) == 16

    def test_core(self, tmp_path, capsys):
        assert run(tmp_path, "core", "credal.json") == 0
        assert "nonempty=True" in capsys.readouterr().out

    def test_coherence_tampered_elicited(self, tmp_path):
        assert run(tmp_path, "coherence", "elicited_tampered.json") == 0
        out = io.read_json(tmp_path / "coherence.json")
        assert not out["coherent"] and out["dutch_book"]["worst_payoff"] < 0

    def test_coherence_bets_and_measure(self, tmp_path):
        assert run(tmp_path, "coherence", "bets_tampered.json") == 0
        assert not io.read_json(tmp_path / "coherence.json")["coherent"]
        assert run(tmp_path, "coherence", "measure.json") == 0
        assert io.read_json(tmp_path / "coherence.json")["coherent"]

    def test_species(self, tmp_path):
        assert run(tmp_path, "species", "species.json") == 0
        rows = io.load_intervals_csv(tmp_path / "intervals.csv")
        assert [r["event"] for r in rows] == ["6|6 7 8", "7|6 7 8", "8|6 7 8"]

    def test_boomerang(self, tmp_path):
        assert run(tmp_path, "boomerang", "boomerang.json") == 0
        rows = io.load_boomerang_csv(tmp_path / "boomerang.csv")
        assert rows[2]["influenced"] == pytest.approx(-0.85)

    def test_missing_file(self, tmp_path):
        assert main(["validate", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 4

    def test_bad_json(self, tmp_path):
        p = tmp_path / "x.json"
        p.write_text("{not json")
        assert main(["core", "--config", str(p), "--out", str(tmp_path)]) == 4


class TestDeterminism:
    @pytest.mark.parametrize(
        "cmd,cfg,out",
        [("discover", "discover.json", "trajectory.csv"), ("species", "species.json", "intervals.csv"),
         ("core", "credal.json", "core.json"), ("boomerang", "boomerang.json", "boomerang.csv")],
    )
    def test_byte_identical(self, tmp_path, cmd, cfg, out):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run(a, cmd, cfg) == 0 and run(b, cmd, cfg) == 0
        assert (a / out).read_bytes() == (b / out).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "xprob", "validate", "--config", str(CONFIGS / "measure.json"), "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "validate: ok" in proc.stdout
