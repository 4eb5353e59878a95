"""Tests for the verification battery."""

import numpy as np
import pytest

from drisoparam.core.verify import VerificationReport, check, flag, run_verification
from drisoparam.geometry.clifford import build_htype_algebra
from drisoparam.geometry.models import CliffordGenerators, HTypeAlgebra


def test_check_and_flag():
    """Test pass/fail of residual and boolean checks."""
    assert check("a", 1e-12, 1e-10).passed
    assert not check("b", np.float64(1e-3), 1e-10).passed
    assert isinstance(check("c", np.float64(0.0), 1.0).residual, float)
    assert flag("d", True).passed
    assert flag("e", False, "detail").residual == 1.0


def test_report_summary():
    """Test counts, first failure and summary lines."""
    report = VerificationReport(seed=3, checks=[
        check("ok", 0.0, 1e-9),
        check("bad", 1.0, 1e-9, "residual too large"),
        flag("worse", False),
    ])
    assert not report.passed
    assert report.first_failure.name == "bad"
    data = report.to_dict()
    assert (data["total"], data["failed"], data["passed"]) == (3, 2, False)
    lines = report.summary_lines()
    assert lines[0] == "1/3 checks passed"
    assert lines[1].startswith("FAILED bad")


def test_empty_report_passes():
    """Test that a report without checks passes."""
    report = VerificationReport(seed=1)
    assert report.passed
    assert report.first_failure is None


@pytest.mark.slow
def test_battery_passes():
    """Test that the battery passes on the built-in algebras."""
    sections = []
    report = run_verification(
        seed=7, samples=4, r_grid=(1.0,), ode_step=5e-3,
        progress_callback=lambda done, total, label: sections.append(label),
    )
    assert report.passed, report.summary_lines()
    assert sections == ["htype", "connection", "frames", "constructions", "biconditional"]
    names = {c.name for c in report.checks}
    assert "biconditional.mixed-complex.r=1.varies" in names
    assert "tube.cayley-k5.det_C" in names


@pytest.mark.slow
def test_battery_names_broken_relations():
    """Test that corrupted generators fail at the relations check."""
    gens = build_htype_algebra(2).gens.copy()
    gens[1] = gens[0]
    broken = HTypeAlgebra(generators=CliffordGenerators(gens=gens), name="broken")
    report = run_verification(seed=7, samples=4, r_grid=(1.0,), algebra=broken, ode_step=5e-3)
    assert not report.passed
    assert report.first_failure.name == "htype.broken.relations"
    assert not any(c.name.startswith("connection.broken") for c in report.checks)


@pytest.mark.slow
def test_battery_passes_with_defaults():
    """Test the battery at 64 normals per scan on radii 0.25 to 4."""
    report = run_verification(seed=7)
    assert report.passed, report.summary_lines()
    names = {c.name for c in report.checks}
    for r in (0.25, 0.5, 1.0, 2.0, 4.0):
        assert f"biconditional.cayley-k5.r={r:g}.holds" in names
        assert f"biconditional.mixed-complex.r={r:g}.varies" in names
