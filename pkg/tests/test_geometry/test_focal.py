"""Tests for adapted frames and the focal shape operator."""

import numpy as np
import pytest

from drisoparam.core.exceptions import SubspaceError
from drisoparam.geometry.clifford import build_htype_algebra
from drisoparam.geometry.constructions import (
    mixed_complex_subspace,
    quaternionic_subspace,
)
from drisoparam.geometry.damek_ricci import build_damek_ricci
from drisoparam.geometry.focal import (
    adapted_frame,
    focal_shape_closed_form,
    focal_shape_operator,
    focal_spectrum,
    tangent_rows,
)
from drisoparam.geometry.models import Subspace


def _generic(wperp, weights):
    vec = np.asarray(weights, dtype=float) @ wperp.basis
    return vec / np.linalg.norm(vec)


@pytest.fixture(scope="module")
def quaternionic_case(quaternionic):
    """Quaternionic subspace with angles (pi/3, 2pi/5, pi/2) and a generic ξ."""
    wperp = quaternionic_subspace(quaternionic, np.pi / 3, 2 * np.pi / 5, np.pi / 2)
    dr = build_damek_ricci(quaternionic.algebra)
    return dr, wperp, _generic(wperp, (0.6, 0.3, -0.5, 0.55))


def test_frame_is_orthonormal_basis(quaternionic_case):
    """Test that the adapted frame spans the whole algebra."""
    dr, wperp, xi = quaternionic_case
    frame = adapted_frame(dr.htype, wperp, xi)
    rows = frame.basis_rows()
    assert rows.shape == (dr.dim, dr.dim)
    assert np.allclose(rows @ rows.T, np.eye(dr.dim), atol=1e-10)


def test_frame_block_dimensions(quaternionic_case):
    """Test l = (n - k) - (m - m1 + 1) and h = k - 1 - m2."""
    dr, wperp, xi = quaternionic_case
    frame = adapted_frame(dr.htype, wperp, xi)
    assert (frame.profile.m1, frame.profile.m2) == (1, 2)
    assert frame.l == (16 - 4) - 3
    assert frame.h == 4 - 1 - 2


def test_frame_serialization_keys(cayley_algebra, cayley_k5):
    """Test the serialized frame fields."""
    frame = adapted_frame(cayley_algebra, cayley_k5, np.eye(8)[0])
    data = frame.to_dict()
    assert set(data) == {"xi", "profile", "U", "eta", "Pbar", "Fbar", "l", "h"}
    assert (data["l"], data["h"]) == (frame.l, frame.h)


def test_shape_operator_matches_closed_form(quaternionic_case):
    """Test S_ξ assembled from ∇ against the closed form."""
    dr, wperp, xi = quaternionic_case
    operator = focal_shape_operator(dr, wperp, xi)
    assert operator.residual <= 1e-10
    assert np.allclose(operator.matrix, operator.matrix.T, atol=1e-10)


def test_shape_operator_is_traceless(quaternionic_case):
    """Test that S_𝔴 is minimal."""
    dr, wperp, xi = quaternionic_case
    assert abs(np.trace(focal_shape_operator(dr, wperp, xi).matrix)) <= 1e-10


def test_tangent_rows_are_tangent(quaternionic_case):
    """Test that the tangent basis is orthonormal and orthogonal to 𝔴⊥."""
    dr, wperp, xi = quaternionic_case
    frame = adapted_frame(dr.htype, wperp, xi)
    rows = tangent_rows(dr, frame)
    assert np.allclose(rows @ rows.T, np.eye(rows.shape[0]), atol=1e-10)
    assert np.allclose(rows[:, dr.v_slice] @ wperp.basis.T, 0.0, atol=1e-10)


def test_spectrum_for_right_angles():
    """Test {0, 1/2, -1/2} for a totally real plane (m = 1, angle pi/2)."""
    alg = build_htype_algebra(1, 2)
    dr = build_damek_ricci(alg)
    wperp = Subspace.from_vectors(alg, np.eye(4)[[0, 2]])
    spectrum = focal_spectrum(dr, wperp, np.eye(4)[0])
    assert np.allclose(spectrum.eigenvalues, [-0.5, 0.0, 0.0, 0.5], atol=1e-10)
    assert spectrum.zero_multiplicity == 2
    assert spectrum.residual <= 1e-10


def test_spectrum_zero_multiplicity(quaternionic_case):
    """Test 0 with multiplicity 1 + l + m1 - 1 and ±sin(φ_i)/2."""
    dr, wperp, xi = quaternionic_case
    spectrum = focal_spectrum(dr, wperp, xi)
    assert spectrum.zero_multiplicity == 1 + 9
    halves = 0.5 * np.sin([np.pi / 3, 2 * np.pi / 5, np.pi / 2])
    expected = np.sort(np.concatenate((np.zeros(10), halves, -halves)))
    assert np.allclose(spectrum.eigenvalues, expected, atol=1e-10)


def test_spectrum_with_zero_angle(complex_algebra):
    """Test that a zero angle adds to the kernel of S_ξ."""
    wperp = mixed_complex_subspace(complex_algebra)
    dr = build_damek_ricci(complex_algebra)
    spectrum = focal_spectrum(dr, wperp, wperp.basis[0])
    assert np.allclose(spectrum.eigenvalues, 0.0, atol=1e-10)
    assert spectrum.zero_multiplicity == len(spectrum.eigenvalues)


def test_closed_form_size(cayley_algebra, cayley_k5):
    """Test that the closed form acts on 𝔞 ⊕ 𝔴 ⊕ 𝔷."""
    frame = adapted_frame(cayley_algebra, cayley_k5, np.eye(8)[0])
    assert focal_shape_closed_form(frame).shape == (1 + 3 + 7, 1 + 3 + 7)


def test_normal_outside_subspace(cayley_dr, cayley_k5):
    """Test that ξ must be a normal vector."""
    with pytest.raises(SubspaceError):
        focal_spectrum(cayley_dr, cayley_k5, np.eye(8)[6])
