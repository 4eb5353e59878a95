"""
Clifford Modules and H-type Algebras.

Builds explicit representations of Cl(m) (matrices G_i with G_i^2 = -id and
G_iG_j = -G_jG_i) and the generalized Heisenberg algebra they define.
"""

import logging
from typing import Dict, Optional

import numpy as np
from scipy.linalg import block_diag

from drisoparam.core.config import DEFAULT_TOLERANCES
from drisoparam.core.exceptions import CliffordRelationError, DimensionMismatchError
from drisoparam.geometry.models import CliffordGenerators, HTypeAlgebra

logger = logging.getLogger(__name__)

MAX_CENTER_DIM = 16

# Smallest module dimension for m = 1..8
_BASE_DIM = {1: 2, 2: 4, 3: 4, 4: 8, 5: 8, 6: 8, 7: 8, 8: 16}


def quaternion_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternions given as (real, i, j, k)."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def _quaternion_conjugate(a: np.ndarray) -> np.ndarray:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def octonion_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Octonion product via Cayley-Dickson doubling of the quaternions.

    (p, q)(r, s) = (pr - s*q, sp + qr*), octonions given by 8 real coordinates.
    """
    p, q = a[:4], a[4:]
    r, s = b[:4], b[4:]
    first = quaternion_product(p, r) - quaternion_product(_quaternion_conjugate(s), q)
    second = quaternion_product(s, p) + quaternion_product(q, _quaternion_conjugate(r))
    return np.concatenate((first, second))


def left_multiplication(product, unit: int, dim: int) -> np.ndarray:
    """
    Matrix of x -> e_unit * x for a bilinear product on R^dim.

    Args:
        product: Callable computing the product of two coordinate vectors
        unit: Index of the basis element multiplying on the left
        dim: Dimension of the algebra

    Returns:
        (dim, dim) matrix whose j-th column is e_unit * e_j
    """
    basis = np.eye(dim)
    return np.column_stack([product(basis[unit], basis[j]) for j in range(dim)])


def quaternion_units() -> np.ndarray:
    """Left multiplications by i, j, k on H = R^4, shape (3, 4, 4)."""
    return np.stack([left_multiplication(quaternion_product, u, 4) for u in (1, 2, 3)])


def _base_generators(m: int) -> np.ndarray:
    if m == 1:
        return np.array([[[0.0, -1.0], [1.0, 0.0]]])
    if m <= 3:
        return quaternion_units()[:m]
    if m <= 7:
        return np.stack([left_multiplication(octonion_product, u, 8) for u in range(1, m + 1)])
    # m == 8 on R^16: diag(L_a, -L_a) for the seven imaginary units and one swap
    octo = [left_multiplication(octonion_product, u, 8) for u in range(1, 8)]
    gens = [block_diag(L, -L) for L in octo]
    eye = np.eye(8)
    gens.append(np.block([[np.zeros((8, 8)), -eye], [eye, np.zeros((8, 8))]]))
    return np.stack(gens)


def _periodic_generators(m: int) -> np.ndarray:
    """Generators for 9 <= m <= 16 on R^(16 * n_{m-8}) via E_a (x) I and w (x) G_i."""
    eight = _base_generators(8)
    inner = _base_generators(m - 8)
    omega = np.eye(16)
    for gen in eight:
        omega = omega @ gen
    # omega^2 = +id and omega anticommutes with every E_a
    eye_inner = np.eye(inner.shape[1])
    gens = [np.kron(gen, eye_inner) for gen in eight]
    gens.extend(np.kron(omega, gen) for gen in inner)
    return np.stack(gens)


def check_clifford_relations(gens: np.ndarray, tol: Optional[float] = None) -> float:
    """
    Check G_i^2 = -id and G_iG_j + G_jG_i = 0 for i != j.

    Args:
        gens: Generator array of shape (m, n, n)
        tol: Allowed residual (identity tolerance by default)

    Returns:
        Largest residual found

    Raises:
        CliffordRelationError: Naming the first failing relation
    """
    tol = DEFAULT_TOLERANCES.identity if tol is None else tol
    m, n = gens.shape[0], gens.shape[1]
    eye = np.eye(n)
    worst = 0.0
    for i in range(m):
        for j in range(i, m):
            anti = gens[i] @ gens[j] + gens[j] @ gens[i]
            target = -2.0 * eye if i == j else 0.0
            residual = float(np.max(np.abs(anti - target)))
            worst = max(worst, residual)
            if residual > tol:
                relation = f"G_{i + 1}^2 = -id" if i == j else (
                    f"G_{i + 1}G_{j + 1} + G_{j + 1}G_{i + 1} = 0 (anticommutation)"
                )
                raise CliffordRelationError(
                    f"Relation {relation} fails with residual {residual:.3e}"
                )
    return worst


def build_clifford_generators(
    m: int, copies: int = 1, tol: Optional[float] = None
) -> CliffordGenerators:
    """
    Build generators G_1..G_m of a Cl(m)-module.

    The module is the direct sum of `copies` copies of the minimal
    representation used here (dimension 2, 4, 4, 8, 8, 8, 8, 16 for
    m = 1..8, multiplied by 16 per period of 8).

    Args:
        m: Dimension of the center, 1 <= m <= 16
        copies: Number of summands of the module
        tol: Tolerance for the relation check

    Returns:
        Validated generators

    Raises:
        ValueError: If m or copies is out of range
        CliffordRelationError: If the relations fail (should not happen)
    """
    if not 1 <= m <= MAX_CENTER_DIM:
        raise ValueError(f"Center dimension m={m} outside supported range 1..{MAX_CENTER_DIM}")
    if copies < 1:
        raise ValueError(f"copies must be positive, got {copies}")

    base = _base_generators(m) if m <= 8 else _periodic_generators(m)
    if copies > 1:
        base = np.stack([block_diag(*([gen] * copies)) for gen in base])

    check_clifford_relations(base, tol)
    logger.debug(f"Built Cl({m}) generators on R^{base.shape[1]}")
    return CliffordGenerators(gens=base)


def minimal_module_dim(m: int) -> int:
    """Dimension of the minimal module produced by build_clifford_generators."""
    if not 1 <= m <= MAX_CENTER_DIM:
        raise ValueError(f"Center dimension m={m} outside supported range 1..{MAX_CENTER_DIM}")
    if m <= 8:
        return _BASE_DIM[m]
    return 16 * _BASE_DIM[m - 8]


def build_htype_algebra(
    m: int, copies: int = 1, name: str = "", tol: Optional[float] = None
) -> HTypeAlgebra:
    """Generalized Heisenberg algebra of the Cl(m)-module with `copies` summands."""
    generators = build_clifford_generators(m, copies, tol)
    return HTypeAlgebra(generators=generators, name=name or f"htype-m{m}-n{generators.n}")


def validate_algebra(alg: HTypeAlgebra, tol: Optional[float] = None) -> float:
    """Run the Clifford relation check on an algebra loaded from a descriptor."""
    return check_clifford_relations(alg.gens, tol)


def _check_z(alg: HTypeAlgebra, Z: np.ndarray) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (alg.z_dim,):
        raise DimensionMismatchError(f"Center vector has shape {Z.shape}, expected ({alg.z_dim},)")
    return Z


def _check_v(alg: HTypeAlgebra, U: np.ndarray) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    if U.shape[-1:] != (alg.v_dim,):
        raise DimensionMismatchError(
            f"𝔳-vector has shape {U.shape}, expected (..., {alg.v_dim})"
        )
    return U


def j_matrix(alg: HTypeAlgebra, Z: np.ndarray) -> np.ndarray:
    """Matrix of J_Z = sum_i z_i G_i."""
    Z = _check_z(alg, Z)
    return np.einsum("i,ijk->jk", Z, alg.gens)


def j_apply(alg: HTypeAlgebra, Z: np.ndarray, U: np.ndarray) -> np.ndarray:
    """
    Apply J_Z to a 𝔳-vector.

    Args:
        alg: H-type algebra
        Z: Center vector
        U: 𝔳-vector

    Returns:
        J_Z U

    Raises:
        DimensionMismatchError: If Z or U does not belong to the algebra
    """
    return j_matrix(alg, Z) @ _check_v(alg, U)


def j_images(alg: HTypeAlgebra, U: np.ndarray) -> np.ndarray:
    """Rows G_1U..G_mU."""
    U = _check_v(alg, U)
    return np.einsum("ijk,k->ij", alg.gens, U)


def v_bracket(alg: HTypeAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """
    Bracket [U, V] in 𝔷, with components <G_i U, V>.

    Args:
        alg: H-type algebra
        U: First 𝔳-vector
        V: Second 𝔳-vector

    Returns:
        Center vector [U, V]
    """
    U = _check_v(alg, U)
    V = _check_v(alg, V)
    return np.einsum("ijk,k,j->i", alg.gens, U, V)


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def htype_identity_residuals(
    alg: HTypeAlgebra, rng: np.random.Generator, draws: int = 32
) -> Dict[str, float]:
    """
    Largest residuals of the H-type identities over random draws.

    Checked for unit X, Y and random U, V:
    J_XJ_Y + J_YJ_X = -2<X,Y>id, [J_XU, V] - [U, J_XV] = -2<U,V>X,
    <J_XU, J_XV> = |X|^2<U,V>, <J_XU, J_YU> = <X,Y>|U|^2 and
    <[U,V], X> = <J_XU, V>.

    Args:
        alg: H-type algebra
        rng: Random generator
        draws: Number of random draws

    Returns:
        Mapping from identity name to largest absolute residual
    """
    n, m = alg.v_dim, alg.z_dim
    eye = np.eye(n)
    worst = {
        "anticommutator": 0.0,
        "bracket_skew": 0.0,
        "isometry": 0.0,
        "polarization": 0.0,
        "duality": 0.0,
    }
    for _ in range(draws):
        X, Y = _unit(rng, m), _unit(rng, m)
        U, V = rng.standard_normal(n), rng.standard_normal(n)
        JX, JY = j_matrix(alg, X), j_matrix(alg, Y)
        entries = {
            "anticommutator": np.max(np.abs(JX @ JY + JY @ JX + 2.0 * (X @ Y) * eye)),
            "bracket_skew": np.max(np.abs(
                v_bracket(alg, JX @ U, V) - v_bracket(alg, U, JX @ V) + 2.0 * (U @ V) * X
            )),
            "isometry": abs((JX @ U) @ (JX @ V) - (X @ X) * (U @ V)),
            "polarization": abs((JX @ U) @ (JY @ U) - (X @ Y) * (U @ U)),
            "duality": abs(v_bracket(alg, U, V) @ X - (JX @ U) @ V),
        }
        for key, value in entries.items():
            worst[key] = max(worst[key], float(value))
    return worst
