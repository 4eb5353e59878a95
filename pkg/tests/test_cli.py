"""Tests for the command-line interface."""

import json

import pandas as pd
import pytest
import yaml

from drisoparam.cli import (
    EXIT_CONFIG,
    EXIT_FAILED,
    EXIT_INFEASIBLE,
    EXIT_OK,
    main,
)
from drisoparam.core.config import Config
from drisoparam.core.verify import VerificationReport
from drisoparam.geometry.clifford import build_htype_algebra

CAYLEY_RUN = {
    "algebra": {"preset": "cayley-plane"},
    "subspace": {"construction": "cayley", "params": {"k": 5}},
    "samples": 8,
}


def _write_run(tmp_path, data, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


def _cli(*argv):
    return main(["--no-progress", *argv], Config())


def test_version(capsys):
    """Test that --version exits 0."""
    assert main(["--version"]) == EXIT_OK
    assert "0.3.0" in capsys.readouterr().out


def test_unknown_command():
    """Test that usage errors exit 2."""
    assert main(["bend"]) == 2


def test_angles_cayley(tmp_path):
    """Test a constant-angle report for the Cayley subspace of dimension 5."""
    config = _write_run(tmp_path, CAYLEY_RUN)
    out = tmp_path / "out"
    assert _cli("angles", "--config", config, "--seed", "3", "--out", str(out)) == EXIT_OK
    report = json.loads((out / "angles.json").read_text(encoding="utf-8"))
    assert report["report"] == "angles"
    assert report["constant"] is True
    assert report["seed"] == 3
    assert report["angles"][:4] == [0.0] * 4
    assert len(report["samples"]) == 8 + 5


def test_angles_deterministic(tmp_path):
    """Test byte-identical reports for the same seed and configuration."""
    config = _write_run(tmp_path, {**CAYLEY_RUN, "seed": 5})
    for name in ("first", "second"):
        assert _cli("angles", "--config", config, "--out", str(tmp_path / name)) == EXIT_OK
    first = (tmp_path / "first" / "angles.json").read_bytes()
    second = (tmp_path / "second" / "angles.json").read_bytes()
    assert first == second


def test_angles_csv(tmp_path):
    """Test the CSV format with one column per angle."""
    config = _write_run(tmp_path, {**CAYLEY_RUN, "output": {"format": "csv"}})
    assert _cli("angles", "--config", config, "--seed", "1") == EXIT_OK
    path = tmp_path / "reports" / "angles.csv"
    lines = path.read_text(encoding="utf-8").splitlines()
    meta = dict(line[2:].split(": ", 1) for line in lines if line.startswith("# "))
    assert meta["report"] == "angles"
    assert meta["tool_version"] == "0.3.0"
    assert meta["seed"] == "1"
    assert len(meta["config_hash"]) == 64
    header = next(line for line in lines if not line.startswith("#"))
    assert header == "sample,m1,m2," + ",".join(f"phi_{i}" for i in range(1, 8))
    assert len(pd.read_csv(path, comment="#")) == 8 + 5


def test_angles_needs_seed(tmp_path):
    """Test that sampled runs without a seed exit 2."""
    config = _write_run(tmp_path, CAYLEY_RUN)
    assert _cli("angles", "--config", config) == EXIT_CONFIG


def test_malformed_config(tmp_path):
    """Test that an invalid run file exits 2."""
    path = tmp_path / "run.yaml"
    path.write_text("algebra: {preset: [\n", encoding="utf-8")
    assert _cli("angles", "--config", str(path), "--seed", "1") == EXIT_CONFIG


def test_missing_subspace(tmp_path):
    """Test that angles and spectrum need a subspace section."""
    config = _write_run(tmp_path, {"algebra": {"preset": "cayley-plane"}, "seed": 1})
    assert _cli("spectrum", "--config", config) == EXIT_CONFIG


def test_nonpositive_radius(tmp_path):
    """Test that r <= 0 exits 2."""
    config = _write_run(tmp_path, {**CAYLEY_RUN, "r_grid": [0.0, 1.0], "seed": 1})
    assert _cli("spectrum", "--config", config) == EXIT_CONFIG


def test_infeasible_quaternionic(tmp_path):
    """Test that infeasible quaternionic angles exit 3."""
    config = _write_run(tmp_path, {
        "algebra": {"preset": "quaternionic-hyperbolic", "n": 5},
        "subspace": {"construction": "quaternionic", "params": {"phi": [0.5236, 0.5236, 1.5708]}},
        "seed": 1,
    })
    assert _cli("angles", "--config", config) == EXIT_INFEASIBLE


def test_spectrum_mixed_complex(tmp_path):
    """Test a spectrum scan with varying principal curvatures."""
    config = _write_run(tmp_path, {
        "algebra": {"preset": "complex-hyperbolic", "n": 4},
        "subspace": {"construction": "mixed-complex"},
        "r_grid": [1.0],
        "samples": 3,
        "seed": 2,
    })
    assert _cli("spectrum", "--config", config) == EXIT_OK
    report = json.loads((tmp_path / "reports" / "spectrum.json").read_text(encoding="utf-8"))
    assert report["constant"] is False
    assert report["angles_constant"] is False
    assert report["biconditional_holds"] is True
    assert [scan["r"] for scan in report["scans"]] == [1.0]


def test_spectrum_radii_from_environment(tmp_path, monkeypatch):
    """Test that DRISO_R_GRID applies when the run file has no r_grid."""
    monkeypatch.setenv("DRISO_R_GRID", "0.5,2")
    config = _write_run(tmp_path, {**CAYLEY_RUN, "samples": 2, "seed": 4})
    assert _cli("spectrum", "--config", config, "--workers", "2") == EXIT_OK
    report = json.loads((tmp_path / "reports" / "spectrum.json").read_text(encoding="utf-8"))
    assert [scan["r"] for scan in report["scans"]] == [0.5, 2.0]
    assert report["constant"] is True


def test_verify_bad_generators_file(tmp_path):
    """Test that an unreadable generators file exits 2."""
    path = tmp_path / "gens.json"
    path.write_text("[1, 2", encoding="utf-8")
    assert _cli("verify", "--generators", str(path)) == EXIT_CONFIG


@pytest.mark.slow
def test_verify_corrupted_generators(tmp_path, capsys):
    """Test that generators violating the relations fail verification with exit 1."""
    data = build_htype_algebra(2).generators.to_dict()
    data["generators"][1] = data["generators"][0]
    path = tmp_path / "gens.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    code = _cli("verify", "--generators", str(path), "--samples", "2", "--ode-step", "5e-3")
    assert code == EXIT_FAILED
    assert "htype.gens.relations" in capsys.readouterr().err
    report = json.loads((tmp_path / "reports" / "verify.json").read_text(encoding="utf-8"))
    assert report["passed"] is False


def test_verify_uses_configured_scan(monkeypatch):
    """Test that verify scans DRISO_SAMPLES normals on DRISO_R_GRID by default."""
    calls = []

    def fake_verification(tol, seed, samples, r_grid, *args, **kwargs):
        calls.append((seed, samples, r_grid))
        return VerificationReport(seed=seed)

    monkeypatch.setattr("drisoparam.cli.run_verification", fake_verification)
    assert _cli("verify") == EXIT_OK
    assert calls == [(7, 64, (0.25, 0.5, 1.0, 2.0, 4.0))]
