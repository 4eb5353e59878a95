"""
Explicit Subspace Families.

Subspaces 𝔴⊥ of 𝔳 with prescribed (constant or varying) generalized Kähler
angle: quaternionic subspaces built from a Gram basis of R^3, Cayley
subspaces span{ξ, J_{Z_1}ξ, ..., J_{Z_{k-1}}ξ} of the octonionic module,
complex examples, and orthogonal sums.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, block_diag, cholesky

from drisoparam.core.config import DEFAULT_TOLERANCES
from drisoparam.core.exceptions import (
    CliffordRelationError,
    DimensionMismatchError,
    InfeasibleConstructionError,
    SubspaceError,
)
from drisoparam.geometry.clifford import j_matrix, quaternion_units
from drisoparam.geometry.models import CliffordGenerators, HTypeAlgebra, Subspace

logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2.0
_CYCLE = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


@dataclass(frozen=True, eq=False)
class QuaternionicModel:
    """𝔳 = H^(n-1) with J_1, J_2, J_3 left multiplication by i, j, k."""

    n: int
    algebra: HTypeAlgebra

    def J(self, i: int) -> np.ndarray:
        """Matrix of J_i for i in 1..3."""
        return self.algebra.gens[i - 1]

    def real_axis(self, q: int) -> np.ndarray:
        """Real unit vector of the q-th quaternionic coordinate (0-based)."""
        vec = np.zeros(self.algebra.v_dim)
        vec[4 * q] = 1.0
        return vec


def quaternionic_model(n: int) -> QuaternionicModel:
    """
    Quaternionic model with 𝔳 = H^(n-1) and J_1J_2 = J_3.

    Args:
        n: Quaternionic dimension parameter (n >= 2)

    Returns:
        QuaternionicModel

    Raises:
        ValueError: If n < 2
        CliffordRelationError: If the cyclic convention fails
    """
    if n < 2:
        raise ValueError(f"Quaternionic model needs n >= 2, got {n}")
    units = quaternion_units()
    gens = np.stack([block_diag(*([unit] * (n - 1))) for unit in units])
    for i, j, k in _CYCLE:
        residual = float(np.max(np.abs(gens[i - 1] @ gens[j - 1] - gens[k - 1])))
        if residual > DEFAULT_TOLERANCES.identity:
            raise CliffordRelationError(f"J_{i}J_{j} = J_{k} fails with residual {residual:.2e}")
    algebra = HTypeAlgebra(generators=CliffordGenerators(gens=gens), name=f"quaternionic-n{n}")
    return QuaternionicModel(n=n, algebra=algebra)


def gram_basis_r3(a1: float, a2: float, a3: float) -> np.ndarray:
    """
    Unit vectors e_1, e_2, e_3 of R^3 (rows) with <e_i, e_{i+1}> = a_{i+2}.

    Args:
        a1: <e_2, e_3>
        a2: <e_3, e_1>
        a3: <e_1, e_2>

    Returns:
        (3, 3) array of rows e_1, e_2, e_3

    Raises:
        InfeasibleConstructionError: If |a_i| >= 1 for some i or
            a1^2 + a2^2 + a3^2 >= 1 + 2 a1 a2 a3
    """
    alphas = (a1, a2, a3)
    for index, value in enumerate(alphas, start=1):
        if not abs(value) < 1:
            raise InfeasibleConstructionError(f"|α_{index}| < 1 violated (α_{index} = {value})")
    lhs = a1 ** 2 + a2 ** 2 + a3 ** 2
    rhs = 1 + 2 * a1 * a2 * a3
    if not lhs < rhs:
        raise InfeasibleConstructionError(
            f"α_1^2 + α_2^2 + α_3^2 < 1 + 2 α_1 α_2 α_3 violated ({lhs:.6g} >= {rhs:.6g})"
        )
    gram = np.array([[1.0, a3, a2], [a3, 1.0, a1], [a2, a1, 1.0]])
    try:
        return cholesky(gram, lower=True)
    except LinAlgError as e:
        raise InfeasibleConstructionError(f"Gram matrix is not positive definite: {e}") from e


def quaternionic_inner_products(phis: Sequence[float]) -> np.ndarray:
    """
    α_1, α_2, α_3 for angles (φ_1, φ_2, φ_3), where
    α_{i+2} = (cos φ_{i+2} - cos φ_i cos φ_{i+1}) / (sin φ_i sin φ_{i+1}).
    """
    cos, sin = np.cos(phis), np.sin(phis)
    alphas = np.zeros(3)
    for i, j, k in _CYCLE:
        alphas[k - 1] = (cos[k - 1] - cos[i - 1] * cos[j - 1]) / (sin[i - 1] * sin[j - 1])
    return alphas


def _check_quaternionic_angles(phis: Sequence[float]) -> None:
    p1, p2, p3 = phis
    if not 0 < p1 <= p2 <= p3 <= HALF_PI + DEFAULT_TOLERANCES.identity:
        raise InfeasibleConstructionError(
            f"0 < φ_1 <= φ_2 <= φ_3 <= pi/2 violated (φ = {tuple(phis)})"
        )
    lhs, rhs = np.cos(p1) + np.cos(p2), 1 + np.cos(p3)
    if not lhs < rhs:
        raise InfeasibleConstructionError(
            f"cos φ_1 + cos φ_2 < 1 + cos φ_3 violated ({lhs:.6g} >= {rhs:.6g})"
        )


def quaternionic_seed(
    model: QuaternionicModel, phis: Sequence[float], block: int = 0
) -> np.ndarray:
    """
    Totally real vectors e_0..e_3 (rows) in the block-th group of four
    quaternionic coordinates, with <e_0, e_i> = 0 and <e_i, e_{i+1}> = α_{i+2}.
    """
    gram_rows = gram_basis_r3(*quaternionic_inner_products(phis))
    base = 4 * block
    axes = np.vstack([model.real_axis(base + q) for q in range(4)])
    seed = np.zeros((4, model.algebra.v_dim))
    seed[0] = axes[0]
    seed[1:] = gram_rows @ axes[1:]
    return seed


def quaternionic_subspace(
    model: QuaternionicModel,
    phi1: float,
    phi2: float,
    phi3: float,
    block: int = 0,
) -> Subspace:
    """
    Four-dimensional subspace with constant quaternionic Kähler angle.

    Returns span{ξ_0, ξ_1, ξ_2, ξ_3} with ξ_0 = e_0 and
    ξ_k = cos φ_k J_k e_0 + sin φ_k J_k e_k.

    Args:
        model: Quaternionic model
        phi1: Smallest angle
        phi2: Middle angle
        phi3: Largest angle
        block: Which group of four quaternionic coordinates to use

    Returns:
        Subspace with orthonormal basis rows ξ_0..ξ_3

    Raises:
        InfeasibleConstructionError: If the angles violate the constraints
        DimensionMismatchError: If the model is too small (n < 5 for block 0)
    """
    phis = (phi1, phi2, phi3)
    _check_quaternionic_angles(phis)
    needed = 4 * (block + 1) + 1
    if model.n < needed:
        raise DimensionMismatchError(
            f"Quaternionic subspace in block {block} needs n >= {needed}, got n = {model.n}"
        )
    seed = quaternionic_seed(model, phis, block)
    rows = [seed[0]]
    for k in (1, 2, 3):
        J = model.J(k)
        rows.append(np.cos(phis[k - 1]) * J @ seed[0] + np.sin(phis[k - 1]) * J @ seed[k])
    logger.debug(f"Quaternionic subspace with angles {phis} in block {block}")
    return Subspace(
        ambient=model.algebra,
        basis=np.vstack(rows),
        provenance={
            "construction": "quaternionic",
            "params": {"phi": [float(p) for p in phis], "block": block},
        },
    )


@dataclass
class FbarStructureReport:
    """Residuals of the quaternionic structure F̄_1, F̄_2, F̄_3 on 𝔴⊥."""

    skipped: bool
    residuals: Dict[str, float] = field(default_factory=dict)
    note: str = ""

    def passed(self, tol: float) -> bool:
        """All residuals within tolerance (a skipped check passes)."""
        return self.skipped or all(value <= tol for value in self.residuals.values())

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the report."""
        return {"skipped": self.skipped, "residuals": self.residuals, "note": self.note}


def fbar_structure_check(
    model: QuaternionicModel,
    wperp: Subspace,
    rng: Optional[np.random.Generator] = None,
    draws: int = 8,
) -> FbarStructureReport:
    """
    Check that F̄_i = (projection of J_i onto 𝔴⊥) / cos φ_i is a quaternionic
    structure on a quaternionic subspace and that the f_i recovered from a
    random η_0 reproduce the Gram data.

    Args:
        model: Quaternionic model the subspace was built in
        wperp: Output of quaternionic_subspace
        rng: Random generator for the η_0 draws
        draws: Number of random η_0

    Returns:
        FbarStructureReport (skipped when φ_3 = pi/2)

    Raises:
        SubspaceError: If wperp was not produced by quaternionic_subspace
    """
    if wperp.provenance.get("construction") != "quaternionic":
        raise SubspaceError("F̄ structure check needs a quaternionic_subspace result")
    phis = np.array(wperp.provenance["params"]["phi"])
    if np.isclose(phis[2], HALF_PI, atol=DEFAULT_TOLERANCES.angle):
        return FbarStructureReport(
            skipped=True,
            note="φ_3 = pi/2: F̄_3 vanishes; the structure uses F̄_3 = F̄_1F̄_2 instead",
        )

    rng = rng or np.random.default_rng(0)
    basis = wperp.basis
    eye = np.eye(4)
    fbar = {i: basis @ model.J(i) @ basis.T / np.cos(phis[i - 1]) for i in (1, 2, 3)}
    residuals = {"square": 0.0, "cyclic": 0.0, "anticommute": 0.0, "images": 0.0}
    for i, j, k in _CYCLE:
        square = float(np.max(np.abs(fbar[i] @ fbar[i] + eye)))
        cyclic = float(np.max(np.abs(fbar[i] @ fbar[j] - fbar[k])))
        residuals["square"] = max(residuals["square"], square)
        residuals["cyclic"] = max(residuals["cyclic"], cyclic)
        residuals["anticommute"] = max(
            residuals["anticommute"], float(np.max(np.abs(fbar[j] @ fbar[i] + fbar[k])))
        )
        # F̄_iξ_0 = ξ_i and F̄_iξ_j = ξ_k
        residuals["images"] = max(
            residuals["images"],
            float(np.max(np.abs(fbar[i][:, 0] - eye[i]))),
            float(np.max(np.abs(fbar[i][:, j] - eye[k]))),
            float(np.max(np.abs(-fbar[j][:, i] - eye[k]))),
        )

    alphas = quaternionic_inner_products(phis)
    residuals["gram"] = 0.0
    residuals["totally_real"] = 0.0
    residuals["unit"] = 0.0
    for _ in range(draws):
        coeffs = rng.standard_normal(4)
        eta0 = coeffs / np.linalg.norm(coeffs)
        f = [basis.T @ eta0]
        for i in (1, 2, 3):
            eta_i = basis.T @ (fbar[i] @ eta0)
            f.append(-(model.J(i) @ eta_i + np.cos(phis[i - 1]) * f[0]) / np.sin(phis[i - 1]))
        for i, j, k in _CYCLE:
            residuals["gram"] = max(residuals["gram"], abs(float(f[i] @ f[j]) - alphas[k - 1]))
        for vec in f:
            residuals["unit"] = max(residuals["unit"], abs(float(vec @ vec) - 1.0))
        for jj in (1, 2, 3):
            J = model.J(jj)
            for a in f:
                for b in f:
                    coupling = abs(float((J @ a) @ b))
                    residuals["totally_real"] = max(residuals["totally_real"], coupling)
    return FbarStructureReport(skipped=False, residuals=residuals)


def cayley_subspace(
    alg: HTypeAlgebra,
    k: int,
    xi: np.ndarray,
    zbasis: Optional[np.ndarray] = None,
) -> Subspace:
    """
    Subspace span{ξ, J_{Z_1}ξ, ..., J_{Z_{k-1}}ξ} of the octonionic module.

    Since Z -> J_Zξ is an isometry onto 𝔳 ⊖ Rξ, every unit vector of the
    result has generalized Kähler angle (0^(k-1), (pi/2)^(8-k)).

    Args:
        alg: H-type algebra with m = 7 and n = 8
        k: Dimension of 𝔴⊥, 1 <= k <= 7
        xi: Unit vector of 𝔳
        zbasis: Orthonormal basis of 𝔷 (rows); the generator basis by default

    Returns:
        Subspace of dimension k

    Raises:
        DimensionMismatchError: If the algebra is not m = 7, n = 8
        ValueError: If k is out of range or ξ is not a unit vector
    """
    if (alg.z_dim, alg.v_dim) != (7, 8):
        raise DimensionMismatchError(
            f"Cayley subspaces need m = 7, n = 8, got m = {alg.z_dim}, n = {alg.v_dim}"
        )
    if not 1 <= k <= 7:
        raise ValueError(f"Cayley subspace dimension k must be in 1..7, got {k}")
    xi = np.asarray(xi, dtype=float)
    if abs(np.linalg.norm(xi) - 1.0) > DEFAULT_TOLERANCES.membership:
        raise ValueError("ξ must be a unit vector")
    zbasis = np.eye(7) if zbasis is None else np.asarray(zbasis, dtype=float)
    rows = [xi] + [j_matrix(alg, zbasis[i]) @ xi for i in range(k - 1)]
    return Subspace(
        ambient=alg,
        basis=np.vstack(rows),
        provenance={"construction": "cayley", "params": {"k": k, "xi": xi.tolist()}},
    )


def mixed_complex_subspace(alg: HTypeAlgebra) -> Subspace:
    """
    span{e, Je, f} in a complex module (m = 1), with f orthogonal to e and Je.

    The Kähler angle of a e + b Je + c f satisfies cos^2 φ = a^2 + b^2, so it
    is not constant.
    """
    e, f = _complex_pair(alg)
    J = j_matrix(alg, np.ones(1))
    return Subspace.from_vectors(
        alg, [e, J @ e, f], provenance={"construction": "mixed-complex", "params": {}}
    )


def kahler_angle_plane(alg: HTypeAlgebra, theta: float) -> Subspace:
    """
    Plane span{e, cos θ Je + sin θ Jf} of constant Kähler angle θ (m = 1).

    Every real plane has constant Kähler angle; at ξ = e the Kähler companion
    is f.
    """
    if not 0 <= theta <= HALF_PI:
        raise ValueError(f"θ must lie in [0, pi/2], got {theta}")
    e, f = _complex_pair(alg)
    J = j_matrix(alg, np.ones(1))
    return Subspace.from_vectors(
        alg,
        [e, np.cos(theta) * J @ e + np.sin(theta) * J @ f],
        provenance={"construction": "kahler-angle-plane", "params": {"theta": float(theta)}},
    )


def _complex_pair(alg: HTypeAlgebra) -> tuple:
    """Unit e = first axis and the first axis f orthogonal to e and Je."""
    if alg.z_dim != 1:
        raise DimensionMismatchError(f"Complex examples need m = 1, got m = {alg.z_dim}")
    if alg.v_dim < 4:
        raise DimensionMismatchError(f"Complex examples need n >= 4, got n = {alg.v_dim}")
    axes = np.eye(alg.v_dim)
    e = axes[0]
    je = j_matrix(alg, np.ones(1)) @ e
    for f in axes[1:]:
        if abs(f @ je) <= DEFAULT_TOLERANCES.identity:
            return e, f
    raise SubspaceError("No coordinate axis orthogonal to e and Je")


def direct_sum(subspaces: List[Subspace], tol: Optional[float] = None) -> Subspace:
    """
    Orthogonal sum of subspaces of a common algebra.

    Args:
        subspaces: Summands with pairwise orthogonal spans
        tol: Orthogonality tolerance

    Returns:
        Subspace whose basis concatenates the summands' bases

    Raises:
        ValueError: If the list is empty
        SubspaceError: If summands overlap or live in different algebras
    """
    tol = DEFAULT_TOLERANCES.membership if tol is None else tol
    if not subspaces:
        raise ValueError("direct_sum needs at least one summand")
    if len(subspaces) == 1:
        return subspaces[0]
    ambient = subspaces[0].ambient
    for other in subspaces[1:]:
        same = other.ambient is ambient or np.array_equal(other.ambient.gens, ambient.gens)
        if not same:
            raise SubspaceError("Summands live in different algebras")
    for a in range(len(subspaces)):
        for b in range(a + 1, len(subspaces)):
            overlap = float(np.max(np.abs(subspaces[a].basis @ subspaces[b].basis.T)))
            if overlap > tol:
                raise SubspaceError(
                    f"Summands {a} and {b} are not orthogonal (overlap {overlap:.2e})"
                )
    return Subspace(
        ambient=ambient,
        basis=np.vstack([s.basis for s in subspaces]),
        provenance={
            "construction": "direct-sum",
            "parts": [s.provenance for s in subspaces],
        },
    )
