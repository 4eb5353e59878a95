"""Tests for Clifford generators and H-type algebras."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drisoparam.core.exceptions import CliffordRelationError, DimensionMismatchError
from drisoparam.geometry.clifford import (
    build_clifford_generators,
    build_htype_algebra,
    check_clifford_relations,
    htype_identity_residuals,
    j_apply,
    j_images,
    minimal_module_dim,
    octonion_product,
    quaternion_product,
    v_bracket,
    validate_algebra,
)
from drisoparam.geometry.models import CliffordGenerators, HTypeAlgebra


@pytest.mark.parametrize(
    "m,dim", [(1, 2), (2, 4), (3, 4), (4, 8), (5, 8), (6, 8), (7, 8), (8, 16)]
)
def test_minimal_dimensions(m, dim):
    """Test the minimal module dimension for m = 1..8."""
    assert minimal_module_dim(m) == dim
    assert build_clifford_generators(m).n == dim


@pytest.mark.parametrize("m", range(1, 17))
def test_relations_hold_for_every_center(m):
    """Test G_i^2 = -id and anticommutation up to m = 16."""
    gens = build_clifford_generators(m)
    assert gens.m == m
    assert check_clifford_relations(gens.gens) <= 1e-12


def test_periodic_dimension():
    """Test that m = 9 uses a module of dimension 16 * 2."""
    assert minimal_module_dim(9) == 32
    assert build_clifford_generators(9).n == 32


def test_copies_give_block_sum():
    """Test that copies multiply the module dimension."""
    gens = build_clifford_generators(3, copies=3)
    assert gens.n == 12
    assert np.allclose(gens.gens[0][4:8, 4:8], gens.gens[0][:4, :4])
    assert np.allclose(gens.gens[0][:4, 4:8], 0.0)


@pytest.mark.parametrize("m,copies", [(0, 1), (17, 1), (2, 0)])
def test_out_of_range_rejected(m, copies):
    """Test that unsupported sizes raise ValueError."""
    with pytest.raises(ValueError):
        build_clifford_generators(m, copies)


def test_m1_generator_and_bracket_sign():
    """Test J e1 = e2 and [e1, e2] = +Z1 for m = 1."""
    alg = build_htype_algebra(1)
    e1, e2 = np.eye(2)
    assert np.allclose(j_apply(alg, np.ones(1), e1), e2)
    assert np.allclose(v_bracket(alg, e1, e2), [1.0])
    assert np.allclose(v_bracket(alg, e2, e1), [-1.0])


def test_quaternion_units_multiply():
    """Test i * j = k in the Hamilton product."""
    i, j, k = np.eye(4)[1:]
    assert np.allclose(quaternion_product(i, j), k)
    assert np.allclose(quaternion_product(j, i), -k)


def test_octonion_norm_is_multiplicative(rng):
    """Test |ab| = |a||b| for random octonions."""
    a, b = rng.standard_normal(8), rng.standard_normal(8)
    assert np.isclose(
        np.linalg.norm(octonion_product(a, b)), np.linalg.norm(a) * np.linalg.norm(b)
    )


@pytest.mark.parametrize("m", [1, 2, 3, 5, 6, 7])
def test_htype_identities(m, rng):
    """Test the H-type identities on random draws."""
    alg = build_htype_algebra(m, copies=2)
    residuals = htype_identity_residuals(alg, rng, draws=50)
    assert set(residuals) == {
        "anticommutator", "bracket_skew", "isometry", "polarization", "duality"
    }
    assert max(residuals.values()) <= 1e-10


@settings(max_examples=25, deadline=None)
@given(
    st.lists(st.floats(-10, 10), min_size=7, max_size=7),
    st.lists(st.floats(-10, 10), min_size=8, max_size=8),
)
def test_j_is_conformal(z, u):
    """Test |J_Z U| = |Z||U| on the Cayley module."""
    alg = build_htype_algebra(7)
    z, u = np.array(z), np.array(u)
    assert np.isclose(
        np.linalg.norm(j_apply(alg, z, u)), np.linalg.norm(z) * np.linalg.norm(u), atol=1e-8
    )


def test_j_images_rows(cayley_algebra):
    """Test that j_images stacks G_iU."""
    u = np.arange(8.0)
    images = j_images(cayley_algebra, u)
    assert images.shape == (7, 8)
    assert np.allclose(images[3], cayley_algebra.gens[3] @ u)


def test_dimension_mismatch(cayley_algebra):
    """Test that vectors of the wrong size are rejected."""
    with pytest.raises(DimensionMismatchError):
        j_apply(cayley_algebra, np.ones(3), np.ones(8))
    with pytest.raises(DimensionMismatchError):
        v_bracket(cayley_algebra, np.ones(4), np.ones(8))


def test_corrupted_generators_name_the_relation():
    """Test that breaking anticommutation is reported by name."""
    gens = build_clifford_generators(2).gens.copy()
    gens[1] = gens[0]
    alg = HTypeAlgebra(generators=CliffordGenerators(gens=gens), name="broken")
    with pytest.raises(CliffordRelationError, match="anticommutation"):
        validate_algebra(alg)


def test_square_relation_failure():
    """Test that G^2 != -id is reported."""
    alg = HTypeAlgebra(generators=CliffordGenerators(gens=np.eye(2)[None]), name="identity")
    with pytest.raises(CliffordRelationError, match="-id"):
        validate_algebra(alg)


def test_generators_round_trip_descriptor():
    """Test that a descriptor rebuilds the same generators."""
    gens = build_clifford_generators(5)
    restored = CliffordGenerators.from_dict(gens.to_dict())
    assert np.array_equal(restored.gens, gens.gens)


def test_descriptor_shape_mismatch():
    """Test that a descriptor with wrong declared sizes is rejected."""
    data = build_clifford_generators(2).to_dict()
    data["n"] = 8
    with pytest.raises(DimensionMismatchError):
        CliffordGenerators.from_dict(data)
