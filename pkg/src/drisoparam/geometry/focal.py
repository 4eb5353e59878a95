"""
Focal Submanifold S_𝔴.

Adapted frames at a unit normal ξ of the minimal submanifold
S_𝔴 = exp(𝔞 ⊕ 𝔴 ⊕ 𝔷) and its shape operator S_ξ X = -(∇_X ξ)^⊤.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
from scipy.linalg import eigvalsh, null_space

from drisoparam.core.config import DEFAULT_TOLERANCES
from drisoparam.core.exceptions import FrameError, ShapeOperatorError
from drisoparam.geometry.damek_ricci import levi_civita
from drisoparam.geometry.kahler_angle import (
    adapted_projections,
    generalized_kahler_angle,
)
from drisoparam.geometry.models import (
    AdaptedFrame,
    DamekRicciAlgebra,
    HTypeAlgebra,
    KahlerProfile,
    Subspace,
)

logger = logging.getLogger(__name__)


def _normalized_rows(rows: np.ndarray) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def _complement(span: np.ndarray, within: np.ndarray, expected: int, what: str) -> np.ndarray:
    """Orthonormal rows spanning the part of span(within) orthogonal to the rows of span."""
    if span.shape[0] == 0:
        coeffs = np.eye(within.shape[0])
    else:
        coeffs = null_space(span @ within.T)
    if coeffs.shape[1] != expected:
        raise FrameError(
            f"Could not complete {what}: expected dimension {expected}, found {coeffs.shape[1]}"
        )
    return coeffs.T @ within


def adapted_frame(
    alg: HTypeAlgebra,
    wperp: Subspace,
    xi: np.ndarray,
    tol: Optional[float] = None,
    profile: Optional[KahlerProfile] = None,
) -> AdaptedFrame:
    """
    Orthonormal frame adapted to ξ and its generalized Kähler angle.

    Args:
        alg: H-type algebra
        wperp: Subspace 𝔴⊥
        xi: Unit vector of 𝔴⊥
        tol: Orthonormality tolerance for the completed frame
        profile: Precomputed generalized Kähler angle of ξ

    Returns:
        AdaptedFrame with P̄_iξ (i >= m1), F̄_iξ (i <= m2), U and η blocks

    Raises:
        FrameError: If the completion fails or the frame is not orthonormal
    """
    tol = DEFAULT_TOLERANCES.sampled * 10 if tol is None else tol
    xi = np.asarray(xi, dtype=float)
    if profile is None:
        profile = generalized_kahler_angle(alg, wperp, xi)
    m, k, n = alg.z_dim, wperp.k, alg.v_dim
    m1, m2 = profile.m1, profile.m2

    pproj, fproj = adapted_projections(alg, wperp, xi, profile.zbasis)
    pbar = _normalized_rows(pproj[m1 - 1:])
    fbar = _normalized_rows(fproj[:m2])

    w_basis = null_space(wperp.basis).T
    U = _complement(pbar, w_basis, (n - k) - (m - m1 + 1), "𝔴 ⊖ span(P̄ξ)")
    H = _complement(
        np.vstack([xi[None, :], fbar]), wperp.basis, k - 1 - m2, "𝔴⊥ ⊖ (Rξ ⊕ span(F̄ξ))"
    )

    frame = AdaptedFrame(
        xi=xi, profile=profile, pbar=pbar, fbar=fbar, U=U, H=H,
        pproj=pproj, fproj=fproj, k=k,
    )
    rows = frame.basis_rows()
    error = float(np.max(np.abs(rows @ rows.T - np.eye(rows.shape[0]))))
    if rows.shape[0] != 1 + n + m or error > tol:
        raise FrameError(f"Adapted frame is not an orthonormal basis (Gram error {error:.2e})")
    logger.debug(f"Adapted frame: m1={m1}, m2={m2}, l={frame.l}, h={frame.h}")
    return frame


def tangent_rows(dr: DamekRicciAlgebra, frame: AdaptedFrame) -> np.ndarray:
    """Basis B, U_1..U_l, P̄_{m1}ξ..P̄_mξ, Z_1..Z_m of 𝔰_𝔴 as algebra coordinates."""
    count = 1 + frame.l + frame.pbar.shape[0] + frame.m
    rows = np.zeros((count, dr.dim))
    rows[0, 0] = 1.0
    start = 1
    for block in (frame.U, frame.pbar):
        rows[start:start + block.shape[0], dr.v_slice] = block
        start += block.shape[0]
    rows[start:, dr.z_slice] = frame.zbasis
    return rows


def focal_shape_closed_form(frame: AdaptedFrame) -> np.ndarray:
    """
    Shape operator in the basis of tangent_rows from the angles alone:
    S_ξZ_i = 1/2 sin φ_i P̄_iξ and S_ξP̄_iξ = 1/2 sin φ_i Z_i for i >= m1,
    zero on B and U.
    """
    l, m, m1 = frame.l, frame.m, frame.profile.m1
    p_count = m - m1 + 1
    size = 1 + l + p_count + m
    matrix = np.zeros((size, size))
    for offset, i in enumerate(range(m1, m + 1)):
        value = 0.5 * np.sin(frame.angles[i - 1])
        p_row = 1 + l + offset
        z_row = 1 + l + p_count + (i - 1)
        matrix[p_row, z_row] = value
        matrix[z_row, p_row] = value
    return matrix


@dataclass
class FocalShapeOperator:
    """Shape operator of S_𝔴 at ξ in the basis of tangent_rows."""

    matrix: np.ndarray
    closed_form: np.ndarray
    basis: np.ndarray
    frame: AdaptedFrame

    @property
    def residual(self) -> float:
        """Largest entry of the difference between assembly and closed form."""
        return float(np.max(np.abs(self.matrix - self.closed_form)))

    def to_dict(self) -> Dict[str, Any]:
        """Serialize matrices and angles."""
        return {
            "matrix": self.matrix.tolist(),
            "closed_form": self.closed_form.tolist(),
            "angles": self.frame.angles.tolist(),
            "residual": self.residual,
        }


def focal_shape_operator(
    dr: DamekRicciAlgebra,
    wperp: Subspace,
    xi: np.ndarray,
    tol: Optional[float] = None,
    frame: Optional[AdaptedFrame] = None,
) -> FocalShapeOperator:
    """
    Assemble S_ξ from the connection and compare it with the closed form.

    Args:
        dr: Damek-Ricci algebra
        wperp: Subspace 𝔴⊥
        xi: Unit vector of 𝔴⊥
        tol: Allowed disagreement between assembly and closed form
        frame: Precomputed adapted frame

    Returns:
        FocalShapeOperator

    Raises:
        SubspaceError: If ξ is not normal to S_𝔴
        ShapeOperatorError: If assembly and closed form disagree
    """
    tol = DEFAULT_TOLERANCES.sampled if tol is None else tol
    if frame is None:
        frame = adapted_frame(dr.htype, wperp, xi)
    basis = tangent_rows(dr, frame)
    xi_coords = dr.embed_v(frame.xi)
    derivatives = np.vstack([levi_civita(dr, xi_coords, q) for q in basis])
    # column j holds S_ξ q_j = -(∇_{q_j} ξ)^⊤ in the basis
    matrix = -(basis @ derivatives.T)
    closed = focal_shape_closed_form(frame)
    result = FocalShapeOperator(matrix=matrix, closed_form=closed, basis=basis, frame=frame)
    if result.residual > tol:
        raise ShapeOperatorError(
            f"Focal shape operator disagrees with closed form (residual {result.residual:.2e})"
        )
    return result


@dataclass
class FocalSpectrum:
    """Eigenvalues of S_ξ with the values predicted by the Kähler angle."""

    eigenvalues: np.ndarray
    expected: np.ndarray
    angles: np.ndarray

    @property
    def residual(self) -> float:
        """Largest difference between computed and predicted eigenvalues."""
        return float(np.max(np.abs(self.eigenvalues - self.expected)))

    @property
    def zero_multiplicity(self) -> int:
        """Number of predicted zero eigenvalues."""
        return int(np.count_nonzero(self.expected == 0.0))

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the spectrum."""
        return {
            "eigenvalues": self.eigenvalues.tolist(),
            "expected": self.expected.tolist(),
            "angles": self.angles.tolist(),
            "zero_multiplicity": self.zero_multiplicity,
        }


def focal_spectrum(
    dr: DamekRicciAlgebra, wperp: Subspace, xi: np.ndarray, tol: Optional[float] = None
) -> FocalSpectrum:
    """
    Spectrum of the focal shape operator.

    Predicted: 0 with multiplicity 1 + l + (m1 - 1) and ±1/2 sin φ_i for
    i = m1..m.
    """
    operator = focal_shape_operator(dr, wperp, xi, tol)
    frame = operator.frame
    eigenvalues = eigvalsh(0.5 * (operator.matrix + operator.matrix.T))
    halves = 0.5 * np.sin(frame.angles[frame.profile.m1 - 1:])
    expected = np.sort(np.concatenate((
        np.zeros(1 + frame.l + frame.profile.m1 - 1), halves, -halves,
    )))
    return FocalSpectrum(eigenvalues=eigenvalues, expected=expected, angles=frame.angles)
