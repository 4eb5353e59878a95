"""
Generalized Kähler Angle.

For a unit ξ in 𝔴⊥ the quadratic form Z -> |F_Z ξ|^2 on 𝔷, where F_Z ξ is
the projection of J_Z ξ onto 𝔴⊥, has eigenvalues cos^2 φ_i. The angles
0 <= φ_1 <= ... <= φ_m <= pi/2 together with an orthonormal eigenbasis of
𝔷 form the generalized Kähler angle of ξ.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh
from scipy.stats import ortho_group

from drisoparam.core.config import DEFAULT_TOLERANCES
from drisoparam.core.exceptions import (
    AngleDegeneracyError,
    DimensionMismatchError,
    SubspaceError,
)
from drisoparam.geometry.clifford import j_images, j_matrix
from drisoparam.geometry.models import HTypeAlgebra, KahlerProfile, Subspace

logger = logging.getLogger(__name__)

HALF_PI = np.pi / 2.0


def _check_member(alg: HTypeAlgebra, wperp: Subspace, xi: np.ndarray, tol: float) -> np.ndarray:
    same = wperp.ambient is alg or (
        wperp.ambient.gens.shape == alg.gens.shape
        and np.array_equal(wperp.ambient.gens, alg.gens)
    )
    if not same:
        raise DimensionMismatchError("Subspace does not belong to the given algebra")
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (alg.v_dim,):
        raise DimensionMismatchError(f"ξ has shape {xi.shape}, expected ({alg.v_dim},)")
    norm = float(np.linalg.norm(xi))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"ξ must be a unit vector, |ξ| = {norm}")
    if not wperp.contains(xi, tol):
        raise SubspaceError("ξ does not lie in 𝔴⊥")
    return xi


def projections(
    alg: HTypeAlgebra, wperp: Subspace, xi: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Split G_iξ into its 𝔴 part P_iξ and its 𝔴⊥ part F_iξ (rows, i = 1..m).

    The rows refer to the generator basis of 𝔷; use adapted_projections
    for an arbitrary basis.
    """
    images = j_images(alg, xi)
    f = images @ wperp.projector
    return images - f, f


def adapted_projections(
    alg: HTypeAlgebra, wperp: Subspace, xi: np.ndarray, zbasis: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """P_{Z_i}ξ and F_{Z_i}ξ for the rows Z_i of zbasis."""
    p, f = projections(alg, wperp, xi)
    return zbasis @ p, zbasis @ f


def angle_form(
    alg: HTypeAlgebra, wperp: Subspace, xi: np.ndarray, tol: Optional[float] = None
) -> np.ndarray:
    """
    Symmetric m x m matrix of Z -> <F_Zξ, F_Zξ> in the generator basis.

    Args:
        alg: H-type algebra
        wperp: Subspace 𝔴⊥
        xi: Unit vector of 𝔴⊥
        tol: Membership tolerance

    Returns:
        Gram matrix of F_1ξ..F_mξ

    Raises:
        SubspaceError: If ξ is not in 𝔴⊥
        ValueError: If ξ is not a unit vector
    """
    tol = DEFAULT_TOLERANCES.membership if tol is None else tol
    xi = _check_member(alg, wperp, xi, tol)
    _, f = projections(alg, wperp, xi)
    gram = f @ f.T
    return 0.5 * (gram + gram.T)


def classify_cos2(cos2: np.ndarray, tol: float) -> np.ndarray:
    """
    Angles from eigenvalues cos^2 φ, snapping to exactly 0 and pi/2.

    Eigenvalues within tol of 1 give 0 and eigenvalues within tol of 0
    give pi/2.
    """
    cos2 = np.clip(np.asarray(cos2, dtype=float), 0.0, 1.0)
    angles = np.arccos(np.sqrt(cos2))
    angles[1.0 - cos2 <= tol] = 0.0
    angles[cos2 <= tol] = HALF_PI
    return angles


def angle_indices(angles: np.ndarray) -> Tuple[int, int]:
    """
    Indices m1 and m2 of an ascending, snapped angle tuple.

    m1 is the first (1-based) index with a positive angle (m + 1 if none),
    m2 the last index with an angle below pi/2 (0 if none).
    """
    m = len(angles)
    zero_count = int(np.count_nonzero(angles == 0.0))
    right_count = int(np.count_nonzero(angles == HALF_PI))
    return 1 + zero_count, m - right_count


def _randomize_degenerate(
    values: np.ndarray, vectors: np.ndarray, tol: float, rng: np.random.Generator
) -> np.ndarray:
    """Rotate the eigenvectors of each cluster of equal eigenvalues by a random orthogonal map."""
    vectors = vectors.copy()
    start = 0
    m = len(values)
    while start < m:
        stop = start + 1
        while stop < m and abs(values[stop] - values[start]) <= tol:
            stop += 1
        size = stop - start
        if size == 1:
            vectors[start] *= rng.choice((-1.0, 1.0))
        else:
            rotation = ortho_group.rvs(size, random_state=rng)
            vectors[start:stop] = rotation @ vectors[start:stop]
        start = stop
    return vectors


def generalized_kahler_angle(
    alg: HTypeAlgebra,
    wperp: Subspace,
    xi: np.ndarray,
    tol: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
) -> KahlerProfile:
    """
    Generalized Kähler angle of ξ with respect to 𝔴⊥.

    Args:
        alg: H-type algebra
        wperp: Subspace 𝔴⊥
        xi: Unit vector of 𝔴⊥
        tol: Classification tolerance on cos^2 φ (angle tolerance by default)
        rng: If given, the eigenbasis inside each repeated eigenvalue is
            randomized; the angles do not depend on it

    Returns:
        KahlerProfile with ascending angles and the matching basis of 𝔷

    Raises:
        SubspaceError: If ξ is not in 𝔴⊥
        ValueError: If ξ is not a unit vector
    """
    tol = DEFAULT_TOLERANCES.angle if tol is None else tol
    form = angle_form(alg, wperp, xi)
    values, vectors = eigh(form)
    # descending cos^2 means ascending angles
    values = values[::-1]
    zbasis = vectors[:, ::-1].T
    if rng is not None:
        zbasis = _randomize_degenerate(values, zbasis, tol, rng)
    angles = classify_cos2(values, tol)
    m1, m2 = angle_indices(angles)
    return KahlerProfile(angles=angles, zbasis=zbasis, m1=m1, m2=m2)


def kahler_angle_wrt(
    alg: HTypeAlgebra, wperp: Subspace, xi: np.ndarray, Z: np.ndarray
) -> float:
    """
    Kähler angle of ξ with respect to the nonzero center vector Z.

    This is the angle between J_Zξ and 𝔴⊥; it lies between the smallest
    and largest generalized Kähler angles of ξ.
    """
    Z = np.asarray(Z, dtype=float)
    norm2 = float(Z @ Z)
    if norm2 == 0.0:
        raise ValueError("Kähler angle with respect to the zero vector is undefined")
    form = angle_form(alg, wperp, xi)
    cos2 = float(np.clip(Z @ form @ Z / norm2, 0.0, 1.0))
    return float(np.arccos(np.sqrt(cos2)))


@dataclass
class ConstantAngleReport:
    """Result of sampling the generalized Kähler angle over unit vectors of 𝔴⊥."""

    constant: bool
    max_deviation: float
    witness: Tuple[int, int]
    angles: np.ndarray  # (samples, m)
    samples: np.ndarray  # (samples, n)
    profiles: List[KahlerProfile] = field(default_factory=list)

    @property
    def reference_angles(self) -> np.ndarray:
        """Angle tuple of the first sample."""
        return self.angles[0]

    def to_dict(self) -> Dict[str, Any]:
        """Serialize without the per-sample bases."""
        return {
            "constant": self.constant,
            "max_deviation": self.max_deviation,
            "witness": list(self.witness),
            "angles": self.angles.tolist(),
            "samples": self.samples.tolist(),
            "m1": [p.m1 for p in self.profiles],
            "m2": [p.m2 for p in self.profiles],
        }


def constant_angle_report(
    alg: HTypeAlgebra,
    wperp: Subspace,
    sampler: Iterable[np.ndarray],
    tol: Optional[float] = None,
    angle_tol: Optional[float] = None,
) -> ConstantAngleReport:
    """
    Decide whether the generalized Kähler angle is constant on 𝔴⊥.

    Args:
        alg: H-type algebra
        wperp: Subspace 𝔴⊥
        sampler: Iterable of unit vectors of 𝔴⊥
        tol: Constancy tolerance on the ∞-norm of angle differences
        angle_tol: Classification tolerance forwarded to the profile

    Returns:
        ConstantAngleReport with the largest pairwise deviation and the
        pair of sample indices realizing it

    Raises:
        ValueError: If the sampler yields nothing
    """
    tol = DEFAULT_TOLERANCES.constant if tol is None else tol
    samples = [np.asarray(xi, dtype=float) for xi in sampler]
    if not samples:
        raise ValueError("Sampler produced no unit vectors")

    profiles = [generalized_kahler_angle(alg, wperp, xi, angle_tol) for xi in samples]
    angles = np.vstack([p.angles for p in profiles])
    spread = np.ptp(angles, axis=0)
    column = int(np.argmax(spread))
    deviation = float(spread[column])
    witness = (int(np.argmin(angles[:, column])), int(np.argmax(angles[:, column])))
    constant = deviation <= tol
    logger.info(
        f"Kähler angle over {len(samples)} samples: "
        f"{'constant' if constant else 'not constant'} (max deviation {deviation:.3e})"
    )
    return ConstantAngleReport(
        constant=constant,
        max_deviation=deviation,
        witness=witness,
        angles=angles,
        samples=np.vstack(samples),
        profiles=profiles,
    )


def kahler_companion(
    wperp: Subspace, xi: np.ndarray, tol: Optional[float] = None
) -> np.ndarray:
    """
    Unit vector η of 𝔴 with F̄ξ = cos φ Jξ + sin φ Jη (center of dimension 1).

    Args:
        wperp: Subspace 𝔴⊥ of an algebra with m = 1
        xi: Unit vector of 𝔴⊥
        tol: Classification tolerance on cos^2 φ

    Returns:
        η = -J(F̄ξ - cos φ Jξ) / sin φ

    Raises:
        DimensionMismatchError: If the center is not one-dimensional
        AngleDegeneracyError: If φ is 0 or pi/2
    """
    tol = DEFAULT_TOLERANCES.angle if tol is None else tol
    alg = wperp.ambient
    if alg.z_dim != 1:
        raise DimensionMismatchError(f"Kähler companion needs m = 1, got m = {alg.z_dim}")
    form = angle_form(alg, wperp, xi)
    cos2 = float(np.clip(form[0, 0], 0.0, 1.0))
    if cos2 <= tol or 1.0 - cos2 <= tol:
        raise AngleDegeneracyError(
            f"Kähler angle of ξ is {'pi/2' if cos2 <= tol else '0'}; companion undefined"
        )
    cos_phi, sin_phi = np.sqrt(cos2), np.sqrt(1.0 - cos2)
    J = j_matrix(alg, np.ones(1))
    jxi = J @ xi
    f = wperp.projector @ jxi
    fbar = f / np.linalg.norm(f)
    return -J @ (fbar - cos_phi * jxi) / sin_phi
