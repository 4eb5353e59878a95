"""Shared fixtures."""

import os

import numpy as np
import pytest

from drisoparam.geometry.clifford import build_htype_algebra
from drisoparam.geometry.constructions import cayley_subspace, quaternionic_model
from drisoparam.geometry.damek_ricci import build_damek_ricci


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def complex_algebra():
    """m = 1 on R^6 (complex hyperbolic space of complex dimension 4)."""
    return build_htype_algebra(1, 3, name="complex-hyperbolic-n4")


@pytest.fixture(scope="session")
def cayley_algebra():
    """m = 7 on R^8 (Cayley hyperbolic plane)."""
    return build_htype_algebra(7, 1, name="cayley-plane")


@pytest.fixture(scope="session")
def heisenberg_algebra():
    """m = 2 on R^8, a non-symmetric Damek-Ricci space."""
    return build_htype_algebra(2, 2, name="heisenberg-type")


@pytest.fixture(scope="session")
def quaternionic():
    """Quaternionic model with 𝔳 = H^4."""
    return quaternionic_model(5)


@pytest.fixture(scope="session")
def cayley_k5(cayley_algebra):
    """Five-dimensional Cayley subspace through the first axis."""
    return cayley_subspace(cayley_algebra, 5, np.eye(8)[0])


@pytest.fixture(scope="session")
def cayley_dr(cayley_algebra):
    """Damek-Ricci algebra of the Cayley plane."""
    return build_damek_ricci(cayley_algebra)


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep DRISO_* settings and log files out of the working tree."""
    for name in [n for n in os.environ if n.startswith("DRISO_")]:
        monkeypatch.delenv(name)
    monkeypatch.setenv("DRISO_LOG_FILE", str(tmp_path / "drisoparam.log"))
    monkeypatch.setenv("DRISO_OUTPUT_DIR", str(tmp_path / "reports"))
    monkeypatch.chdir(tmp_path)

