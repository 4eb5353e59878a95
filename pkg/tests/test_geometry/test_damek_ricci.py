"""Tests for the Damek-Ricci connection, curvature and geodesics."""

import numpy as np
import pytest

from drisoparam.core.exceptions import DimensionMismatchError
from drisoparam.geometry.clifford import build_htype_algebra
from drisoparam.geometry.damek_ricci import (
    build_damek_ricci,
    connection_residuals,
    curvature,
    curvature_identity_residuals,
    curvature_residuals,
    dr_bracket,
    geodesic_residual,
    geodesic_velocity,
    levi_civita,
    sectional_curvature,
)
from drisoparam.geometry.models import AlgebraVector


@pytest.fixture(params=[(1, 2), (2, 2), (3, 1), (7, 1)], ids=["m1", "m2", "m3", "m7"])
def dr(request):
    """Damek-Ricci algebras over several centers."""
    m, copies = request.param
    return build_damek_ricci(build_htype_algebra(m, copies))


def test_dimensions(cayley_dr):
    """Test dim = 1 + n + m for the Cayley plane."""
    assert (cayley_dr.n, cayley_dr.m, cayley_dr.dim) == (8, 7, 16)


def test_bracket_of_b(cayley_dr):
    """Test [B, V] = V/2 and [B, Z] = Z."""
    V = np.arange(1.0, 9.0)
    Z = np.arange(1.0, 8.0)
    v, z = cayley_dr.embed_v(V), cayley_dr.embed_z(Z)
    assert np.allclose(dr_bracket(cayley_dr, cayley_dr.B, v), 0.5 * v)
    assert np.allclose(dr_bracket(cayley_dr, cayley_dr.B, z), z)


def test_nabla_v_of_b(cayley_dr):
    """Test ∇_V B = -V/2."""
    V = np.linspace(-1.0, 1.0, 8)
    v = cayley_dr.embed_v(V)
    assert np.allclose(levi_civita(cayley_dr, cayley_dr.B, v), -0.5 * v)


def test_nabla_b_vanishes_on_b(cayley_dr):
    """Test ∇_B B = 0."""
    assert np.allclose(levi_civita(cayley_dr, cayley_dr.B, cayley_dr.B), 0.0)


def test_structured_and_array_vectors_agree(cayley_dr):
    """Test that AlgebraVector and coordinates give the same connection."""
    vec = AlgebraVector(r=0.3, U=np.ones(8), X=np.arange(7.0))
    direction = np.linspace(0.0, 1.0, 16)
    assert np.allclose(
        levi_civita(cayley_dr, vec, direction), levi_civita(cayley_dr, vec.to_array(), direction)
    )


def test_wrong_length_rejected(cayley_dr):
    """Test that coordinates of the wrong length raise."""
    with pytest.raises(DimensionMismatchError):
        levi_civita(cayley_dr, np.ones(15), np.ones(16))


def test_connection_is_metric_and_torsion_free(dr, rng):
    """Test metric compatibility and torsion freeness on random fields."""
    residuals = connection_residuals(dr, rng, draws=20)
    assert residuals["metric"] <= 1e-10
    assert residuals["torsion"] <= 1e-10


def test_curvature_symmetries(dr, rng):
    """Test the curvature symmetries, Bianchi and Jacobi identities."""
    residuals = curvature_residuals(dr, rng, draws=10)
    assert max(residuals.values()) <= 1e-10


def test_closed_curvature_formulas(dr, rng):
    """Test the nine closed curvature formulas."""
    residuals = curvature_identity_residuals(dr, rng, draws=10)
    assert len(residuals) == 9
    for name, value in residuals.items():
        assert value <= 1e-10, name


def test_r_b_z_b_is_z(cayley_dr):
    """Test R(B, Z)B = Z for a basis vector of the center."""
    Z = cayley_dr.embed_z(np.eye(7)[2])
    assert np.allclose(curvature(cayley_dr, cayley_dr.B, Z, cayley_dr.B), Z)


def test_sectional_curvature_of_b_planes(dr):
    """Test K(B, V) = -1/4 and K(B, Z) = -1."""
    assert np.isclose(sectional_curvature(dr, dr.B, dr.embed_v(np.eye(dr.n)[0])), -0.25)
    assert np.isclose(sectional_curvature(dr, dr.B, dr.embed_z(np.eye(dr.m)[0])), -1.0)


def test_cayley_plane_is_quarter_pinched(cayley_dr, rng):
    """Test that sectional curvatures of the Cayley plane lie in [-1, -1/4]."""
    for _ in range(10):
        x, y = rng.standard_normal(16), rng.standard_normal(16)
        value = sectional_curvature(cayley_dr, x, y)
        assert -1.0 - 1e-10 <= value <= -0.25 + 1e-10


def test_degenerate_plane(cayley_dr):
    """Test that parallel vectors have no sectional curvature."""
    with pytest.raises(ValueError):
        sectional_curvature(cayley_dr, cayley_dr.B, 2 * cayley_dr.B)


def test_geodesic_starts_at_xi(cayley_dr):
    """Test γ'(0) = ξ and the limit direction -B."""
    xi = np.eye(8)[3]
    assert np.allclose(geodesic_velocity(cayley_dr, xi, 0.0), cayley_dr.embed_v(xi))
    assert np.allclose(geodesic_velocity(cayley_dr, xi, 60.0), -cayley_dr.B, atol=1e-12)


def test_geodesic_equation(cayley_dr, rng):
    """Test ∇_{γ'}γ' = 0 along the normal geodesic."""
    xi = rng.standard_normal(8)
    xi /= np.linalg.norm(xi)
    assert geodesic_residual(cayley_dr, xi, np.linspace(0.0, 5.0, 26)) <= 1e-7


def test_geodesic_needs_unit_vector(cayley_dr):
    """Test that a non-unit ξ is rejected."""
    with pytest.raises(ValueError):
        geodesic_velocity(cayley_dr, 2 * np.eye(8)[0], 1.0)
