"""Tests for process configuration and tolerances."""

import pytest

from drisoparam.core.config import DEFAULT_TOLERANCES, Config, Tolerances


def test_default_tolerances():
    """Test the default tolerance values."""
    assert DEFAULT_TOLERANCES.identity == 1e-12
    assert DEFAULT_TOLERANCES.sampled == 1e-10
    assert DEFAULT_TOLERANCES.spectrum == 1e-8


def test_override_skips_none():
    """Test that None leaves a tolerance unchanged."""
    tol = Tolerances().override(angle=1e-6, spectrum=None)
    assert tol.angle == 1e-6
    assert tol.spectrum == DEFAULT_TOLERANCES.spectrum
    assert DEFAULT_TOLERANCES.angle == 1e-9


def test_tolerances_are_frozen():
    """Test that tolerance sets cannot be mutated."""
    with pytest.raises(AttributeError):
        DEFAULT_TOLERANCES.angle = 1.0


def test_config_defaults():
    """Test configuration defaults without overriding variables."""
    config = Config()
    assert config.app_name == "drisoparam"
    assert config.seed == 7
    assert config.samples == 64
    assert config.r_grid == (0.25, 0.5, 1.0, 2.0, 4.0)
    assert config.tolerances() == Tolerances()


def test_config_reads_environment(monkeypatch, tmp_path):
    """Test that DRISO_* variables override the defaults."""
    monkeypatch.setenv("DRISO_SEED", "11")
    monkeypatch.setenv("DRISO_R_GRID", "0.5, 1.5,")
    monkeypatch.setenv("DRISO_TOL_SPEC", "1e-6")
    monkeypatch.setenv("DRISO_WORKERS", "4")
    config = Config()
    assert config.seed == 11
    assert config.r_grid == (0.5, 1.5)
    assert config.workers == 4
    assert config.tolerances().spectrum == 1e-6
    assert config.output_dir == tmp_path / "reports"


def test_config_env_file(monkeypatch, tmp_path):
    """Test loading settings from an explicit .env file."""
    monkeypatch.setenv("DRISO_ODE_STEP", "0.5")
    monkeypatch.delenv("DRISO_ODE_STEP")
    env_file = tmp_path / "run.env"
    env_file.write_text("DRISO_ODE_STEP=0.002\n", encoding="utf-8")
    config = Config(str(env_file))
    assert config.ode_step == 0.002


def test_config_repr():
    """Test the string representation."""
    assert "seed=7" in repr(Config())
