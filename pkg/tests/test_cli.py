import json
import subprocess
import sys

import numpy as np
import pytest

from slhkit.cli import run_command
from slhkit.config import config_from_dict, load_config
from slhkit.errors import ParseError, ValidationError
from slhkit.report import (
    Report,
    emit_report,
    report_to_csv_bytes,
    report_to_json_bytes,
)

MINIMAL = {
    "m": 1,
    "n": 1,
    "E": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
}

SCALAR_MODEL = {
    "m": 1,
    "n": 1,
    "E": [[[0.3, 0.0], [0.5, -0.2]], [[0.5, 0.2], [1.0, 0.0]]],
    "seed": 7,
}


def run_cli(args, cwd=None):
    return subprocess.run([sys.executable, "-m", "slhkit", *args],
                          capture_output=True, text=True, cwd=cwd)


class TestConfig:
    def test_minimal_defaults(self):
        cfg = config_from_dict(MINIMAL)
        assert cfg.grid.half_width == 40.0 and cfg.grid.spacing == 1e-3
        assert cfg.fock.d == 5 and cfg.seed == 0
        assert cfg.tolerances.kernel == 1e-8

    def test_round_trip_canonical_dict(self):
        cfg = config_from_dict(SCALAR_MODEL)
        echoed = cfg.canonical_dict()
        # strip the None gauge entries the schema treats as absent
        echoed = {k: v for k, v in echoed.items() if v is not None}
        cfg2 = config_from_dict(echoed)
        assert cfg.config_hash() == cfg2.config_hash()

    def test_non_hermitian_block_named(self):
        bad = dict(MINIMAL)
        bad["E"] = [[[0.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]]
        with pytest.raises(ValidationError, match=r"block \(0,1\)"):
            config_from_dict(bad)

    def test_cutoff_guard(self):
        bad = dict(MINIMAL)
        bad["fock"] = {"d": 2}
        with pytest.raises(ValidationError, match="cutoff"):
            config_from_dict(bad)

    def test_z_and_sigma_exclusive(self):
        bad = dict(MINIMAL)
        bad["Z"] = [[[0.0, 0.0]]]
        bad["sigma"] = 0.5
        with pytest.raises(ValidationError, match="at most one"):
            config_from_dict(bad)

    def test_parse_error_positions(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\n  \"m\": 1,\n}")
        with pytest.raises(ParseError, match="line 3"):
            load_config(str(path))

    def test_unknown_keys_rejected(self):
        bad = dict(MINIMAL)
        bad["extra"] = 1
        with pytest.raises(ValidationError, match="unknown"):
            config_from_dict(bad)


class TestReportSerialization:
    def test_empty_report_envelope(self):
        rep = Report(command="phase", config_hash="abc")
        data = json.loads(report_to_json_bytes(rep))
        assert data == {"command": "phase", "config_hash": "abc",
                        "results": {}, "checks": []}
        csv_text = report_to_csv_bytes(rep).decode()
        assert csv_text == "config_hash,name,value,tolerance,pass\n"

    def test_complex_encoding(self):
        rep = Report(command="slh", config_hash="x")
        rep.add("value", 1.0 - 2.0j, None, passed=True)
        data = json.loads(report_to_json_bytes(rep))
        assert data["checks"][0]["value"] == [1.0, -2.0]

    def test_same_report_twice_is_byte_identical(self, tmp_path):
        cfg = config_from_dict(SCALAR_MODEL)
        rep = run_command("phase", cfg)
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        emit_report(rep, "json", str(p1))
        emit_report(rep, "json", str(p2))
        assert p1.read_bytes() == p2.read_bytes()


class TestDeterminism:
    @pytest.mark.parametrize("command", ["slh", "phase", "scatter", "fock"])
    def test_rerun_is_byte_identical(self, command):
        cfg = config_from_dict(SCALAR_MODEL)
        rep1 = run_command(command, cfg, sweep=2 if command in ("slh", "fock") else 0)
        rep2 = run_command(command, cfg, sweep=2 if command in ("slh", "fock") else 0)
        assert report_to_json_bytes(rep1) == report_to_json_bytes(rep2)
        assert report_to_csv_bytes(rep1) == report_to_csv_bytes(rep2)

    def test_sweep_count_records(self):
        cfg = config_from_dict(SCALAR_MODEL)
        rep = run_command("fock", cfg, sweep=5)
        sweep_checks = [c for c in rep.checks if c.name.startswith("sweep[")]
        assert len(sweep_checks) == 5
        assert all(c.passed for c in sweep_checks)

    def test_seed_changes_sweep_values(self):
        cfg = config_from_dict(SCALAR_MODEL)
        rep1 = run_command("slh", cfg, seed=1, sweep=3)
        rep2 = run_command("slh", cfg, seed=2, sweep=3)
        v1 = [c.value for c in rep1.checks if c.name.startswith("sweep")]
        v2 = [c.value for c in rep2.checks if c.name.startswith("sweep")]
        assert v1 != v2


class TestPhaseRows:
    def test_table_contents(self):
        cfg = config_from_dict({**MINIMAL,
                                "phase": {"E": [0.0, float(np.pi)],
                                          "sigma": [0.0]}})
        rep = run_command("phase", cfg)
        rows = rep.results["rows"]
        assert len(rows) == 2
        e0 = rows[0]
        assert e0[2] == 1.0 and e0[3] == 1.0 and e0[4] == 1.0
        epi = rows[1]
        assert abs(epi[4] - (-1.0)) < 1e-15
        assert abs(epi[2] - epi[3]) == 0.0  # sigma = 0 collapse

    def test_csv_has_one_row_per_check(self):
        cfg = config_from_dict({**MINIMAL,
                                "phase": {"E": [0.0, 0.5, 1.0], "sigma": [0.0]}})
        rep = run_command("phase", cfg)
        lines = report_to_csv_bytes(rep).decode().strip().split("\n")
        assert len(lines) == 1 + len(rep.checks)
        assert lines[0] == "config_hash,name,value,tolerance,pass"


class TestExitCodes:
    def test_passing_config(self, tmp_path):
        path = tmp_path / "ok.json"
        path.write_text(json.dumps(SCALAR_MODEL))
        out = tmp_path / "report.json"
        proc = run_cli(["slh", "--config", str(path), "--out", str(out)])
        assert proc.returncode == 0, proc.stderr
        assert json.loads(out.read_text())["command"] == "slh"

    def test_non_hermitian_config_fails(self, tmp_path):
        bad = dict(MINIMAL)
        bad["E"] = [[[0.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [0.0, 0.0]]]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        proc = run_cli(["slh", "--config", str(path)])
        assert proc.returncode != 0
        assert "block" in proc.stderr

    def test_failing_check_names_first_failure(self, tmp_path):
        # diagonal coupling keeps the boundary kernel nonempty, so the angle
        # check runs and cannot beat an impossibly tight tolerance
        strict = {
            "m": 1, "n": 1,
            "E": [[[0.3, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]],
            "tolerances": {"kernel": 1e-30},
        }
        path = tmp_path / "strict.json"
        path.write_text(json.dumps(strict))
        proc = run_cli(["fock", "--config", str(path)])
        assert proc.returncode == 1
        assert "FAILED:" in proc.stderr

    def test_cli_reruns_byte_identical(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(SCALAR_MODEL))
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            proc = run_cli(["fock", "--config", str(path), "--seed", "3",
                            "--sweep", "2", "--out", str(out)])
            assert proc.returncode == 0, proc.stderr
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
