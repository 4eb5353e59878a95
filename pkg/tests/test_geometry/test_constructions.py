"""Tests for the explicit subspace families."""

import numpy as np
import pytest

from drisoparam.core.exceptions import (
    DimensionMismatchError,
    InfeasibleConstructionError,
    SubspaceError,
)
from drisoparam.geometry.clifford import build_htype_algebra
from drisoparam.geometry.constructions import (
    cayley_subspace,
    direct_sum,
    fbar_structure_check,
    gram_basis_r3,
    kahler_angle_plane,
    mixed_complex_subspace,
    quaternionic_inner_products,
    quaternionic_model,
    quaternionic_subspace,
)
from drisoparam.geometry.kahler_angle import angle_form, generalized_kahler_angle
from drisoparam.utils.sampling import sphere_sampler

FEASIBLE = [
    (np.pi / 3, np.pi / 3, np.pi / 3),
    (np.pi / 4, np.pi / 3, 5 * np.pi / 12),
    (np.pi / 3, 2 * np.pi / 5, np.pi / 2),
]


def test_gram_basis_feasible():
    """Test unit rows with the prescribed inner products."""
    rows = gram_basis_r3(0.5, 0.5, 0.5)
    assert np.allclose(np.linalg.norm(rows, axis=1), 1.0)
    assert np.isclose(rows[1] @ rows[2], 0.5)
    assert np.isclose(rows[2] @ rows[0], 0.5)
    assert np.isclose(rows[0] @ rows[1], 0.5)


def test_gram_basis_asymmetric():
    """Test that α_1, α_2, α_3 land on the right pairs."""
    rows = gram_basis_r3(0.1, -0.2, 0.3)
    assert np.isclose(rows[1] @ rows[2], 0.1)
    assert np.isclose(rows[2] @ rows[0], -0.2)
    assert np.isclose(rows[0] @ rows[1], 0.3)


@pytest.mark.parametrize("alphas", [(1.0, 0.0, 0.0), (0.9, 0.9, -0.9), (0.0, 0.0, -1.2)])
def test_gram_basis_infeasible(alphas):
    """Test that violated inequalities raise."""
    with pytest.raises(InfeasibleConstructionError):
        gram_basis_r3(*alphas)


def test_quaternionic_model_relations(quaternionic):
    """Test J_1J_2 = J_3 in the quaternionic model."""
    assert np.allclose(quaternionic.J(1) @ quaternionic.J(2), quaternionic.J(3))
    assert quaternionic.algebra.v_dim == 16


def test_quaternionic_model_size():
    """Test that n < 2 is rejected."""
    with pytest.raises(ValueError):
        quaternionic_model(1)


@pytest.mark.parametrize("phis", FEASIBLE)
def test_quaternionic_constant_angle(quaternionic, phis):
    """Test that every unit vector has angle tuple (φ_1, φ_2, φ_3)."""
    wperp = quaternionic_subspace(quaternionic, *phis)
    assert np.allclose(wperp.basis @ wperp.basis.T, np.eye(4), atol=1e-12)
    for xi in sphere_sampler(wperp, 12, seed=2, include_basis=True):
        profile = generalized_kahler_angle(quaternionic.algebra, wperp, xi)
        assert np.allclose(profile.angles, phis, atol=1e-8)


@pytest.mark.parametrize("phis", FEASIBLE[:2])
def test_quaternionic_angle_form_is_diagonal(quaternionic, phis):
    """Test that J_1, J_2, J_3 diagonalize the angle form."""
    wperp = quaternionic_subspace(quaternionic, *phis)
    for xi in sphere_sampler(wperp, 10, seed=4):
        form = angle_form(quaternionic.algebra, wperp, xi)
        assert np.allclose(form, np.diag(np.cos(phis) ** 2), atol=1e-10)


@pytest.mark.parametrize("phis", [
    (np.pi / 6, np.pi / 6, np.pi / 2),
    (np.pi / 4, np.pi / 3, np.pi / 2),
    (np.pi / 3, np.pi / 4, np.pi / 2),
    (0.0, np.pi / 3, np.pi / 2),
])
def test_quaternionic_infeasible(quaternionic, phis):
    """Test rejection of unordered or infeasible angle triples."""
    with pytest.raises(InfeasibleConstructionError):
        quaternionic_subspace(quaternionic, *phis)


def test_quaternionic_needs_room():
    """Test that block 0 needs n >= 5."""
    with pytest.raises(DimensionMismatchError):
        quaternionic_subspace(quaternionic_model(4), np.pi / 3, np.pi / 3, np.pi / 3)


def test_quaternionic_inner_products():
    """Test α = 1/3 for equal angles pi/3."""
    assert np.allclose(quaternionic_inner_products([np.pi / 3] * 3), 1.0 / 3.0)


@pytest.mark.parametrize("phis", FEASIBLE[:2])
def test_fbar_structure(quaternionic, phis, rng):
    """Test that F̄_i form a quaternionic structure on 𝔴⊥."""
    wperp = quaternionic_subspace(quaternionic, *phis)
    report = fbar_structure_check(quaternionic, wperp, rng)
    assert not report.skipped
    assert report.passed(1e-10)
    assert set(report.residuals) >= {"square", "cyclic", "gram", "totally_real"}


def test_fbar_structure_skipped_at_right_angle(quaternionic):
    """Test that φ_3 = pi/2 skips the structure check."""
    wperp = quaternionic_subspace(quaternionic, *FEASIBLE[2])
    report = fbar_structure_check(quaternionic, wperp)
    assert report.skipped
    assert report.passed(0.0)
    assert "F̄_3" in report.note


def test_fbar_needs_quaternionic_subspace(quaternionic, complex_algebra):
    """Test that other subspaces are rejected."""
    with pytest.raises(SubspaceError):
        fbar_structure_check(quaternionic, mixed_complex_subspace(complex_algebra))


def test_cayley_provenance(cayley_k5):
    """Test the recorded construction parameters."""
    assert cayley_k5.k == 5
    assert cayley_k5.provenance["construction"] == "cayley"
    assert cayley_k5.provenance["params"]["k"] == 5


def test_cayley_custom_basis(cayley_algebra, rng):
    """Test that a rotated basis of 𝔷 still gives an orthonormal span."""
    q, _ = np.linalg.qr(rng.standard_normal((7, 7)))
    wperp = cayley_subspace(cayley_algebra, 4, np.eye(8)[2], q.T)
    assert np.allclose(wperp.basis @ wperp.basis.T, np.eye(4), atol=1e-12)


@pytest.mark.parametrize("k", [0, 8])
def test_cayley_k_range(cayley_algebra, k):
    """Test that k = 8 (𝔴 = 0) and k = 0 are rejected."""
    with pytest.raises(ValueError):
        cayley_subspace(cayley_algebra, k, np.eye(8)[0])


def test_cayley_needs_octonions(heisenberg_algebra):
    """Test that Cayley subspaces need m = 7, n = 8."""
    with pytest.raises(DimensionMismatchError):
        cayley_subspace(heisenberg_algebra, 3, np.eye(8)[0])


def test_complex_examples_need_m1(cayley_algebra):
    """Test that complex examples need a one-dimensional center."""
    with pytest.raises(DimensionMismatchError):
        mixed_complex_subspace(cayley_algebra)
    with pytest.raises(DimensionMismatchError):
        mixed_complex_subspace(build_htype_algebra(1))


def test_kahler_plane_theta_range(complex_algebra):
    """Test θ in [0, pi/2]."""
    with pytest.raises(ValueError):
        kahler_angle_plane(complex_algebra, 2.0)


def test_direct_sum_of_quaternionic_blocks():
    """Test the orthogonal sum of two quaternionic subspaces."""
    model = quaternionic_model(9)
    first = quaternionic_subspace(model, *FEASIBLE[0])
    second = quaternionic_subspace(model, *FEASIBLE[0], block=1)
    total = direct_sum([first, second])
    assert total.k == 8
    assert total.provenance["construction"] == "direct-sum"
    assert len(total.provenance["parts"]) == 2
    for xi in sphere_sampler(total, 6, seed=9):
        profile = generalized_kahler_angle(model.algebra, total, xi)
        assert np.allclose(profile.angles, FEASIBLE[0], atol=1e-8)


def test_direct_sum_overlap(quaternionic):
    """Test that overlapping summands are rejected."""
    wperp = quaternionic_subspace(quaternionic, *FEASIBLE[0])
    with pytest.raises(SubspaceError):
        direct_sum([wperp, wperp])


def test_direct_sum_needs_summands():
    """Test that the empty sum is rejected."""
    with pytest.raises(ValueError):
        direct_sum([])
