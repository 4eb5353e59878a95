"""
Tubes Around S_𝔴.

Operators C(r) and E(r) built from the S_𝔴-Jacobi fields, the shape
operator S^r = E(r)C(r)^{-1} of the tube of radius r at γ(r) with respect to
-γ'(r), its spectrum, mean curvature and characteristic polynomial, and
scans of the principal curvatures over unit normals.

Blocks follow the decomposition
RB ⊕ 𝔘 ⊕ ℌ ⊕ (⊕ 𝔉_i, i < m1) ⊕ (⊕ 𝔐_i, m1 <= i <= m2) ⊕ (⊕ 𝔓_i, i > m2)
with 𝔉_i = (F̄_iξ, Z_i), 𝔐_i = (P̄_iξ, F̄_iξ, Z_i) and 𝔓_i = (P̄_iξ, Z_i).
On the tangent side B is replaced by sech(r/2)B + tanh(r/2)ξ.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from scipy.linalg import block_diag, eigvalsh, solve

from drisoparam.core.config import DEFAULT_TOLERANCES, Tolerances
from drisoparam.core.exceptions import ShapeOperatorError
from drisoparam.geometry.focal import adapted_frame
from drisoparam.geometry.jacobi import JacobiTag, closed_jacobi_field, field_derivatives
from drisoparam.geometry.kahler_angle import constant_angle_report, generalized_kahler_angle
from drisoparam.geometry.models import (
    AdaptedFrame,
    DamekRicciAlgebra,
    KahlerProfile,
    Subspace,
)

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, str], None]

# rows/columns of the generic (P̄, F̄, Z) block kept for each block kind
_BLOCK_SLICES = {"F": [1, 2], "M": [0, 1, 2], "P": [0, 2]}
_BLOCK_FAMILIES = {"F": ("Fbar", "Z"), "M": ("Pbar", "Fbar", "Z"), "P": ("Pbar", "Z")}


def _check_radius(r: float) -> None:
    if not r > 0:
        raise ValueError(f"Tube radius must be positive, got {r}")


@dataclass(frozen=True)
class Block:
    """One summand of the block decomposition."""

    kind: str  # "BU", "H", "F", "M" or "P"
    index: int  # 1-based center index for F, M, P blocks; 0 otherwise
    start: int
    size: int

    @property
    def stop(self) -> int:
        """End of the block (exclusive)."""
        return self.start + self.size


def block_layout(frame: AdaptedFrame) -> List[Block]:
    """
    Block decomposition of (𝔞 ⊕ 𝔫) ⊖ Rξ for a frame.

    Args:
        frame: Adapted frame at ξ

    Returns:
        Blocks in order; empty blocks are omitted
    """
    m1, m2 = frame.profile.m1, frame.profile.m2
    blocks = [Block("BU", 0, 0, 1 + frame.l)]
    start = 1 + frame.l
    if frame.h:
        blocks.append(Block("H", 0, start, frame.h))
        start += frame.h
    for i in range(1, frame.m + 1):
        kind = "F" if i < m1 else ("M" if i <= m2 else "P")
        size = len(_BLOCK_SLICES[kind])
        blocks.append(Block(kind, i, start, size))
        start += size
    return blocks


def domain_tags(frame: AdaptedFrame) -> List[JacobiTag]:
    """Frame vectors of (𝔞 ⊕ 𝔫) ⊖ Rξ in block order."""
    tags = [JacobiTag("B")]
    tags.extend(JacobiTag("U", j) for j in range(1, frame.l + 1))
    tags.extend(JacobiTag("eta", j) for j in range(1, frame.h + 1))
    for block in block_layout(frame)[1:]:
        if block.kind in _BLOCK_FAMILIES:
            tags.extend(JacobiTag(family, block.index) for family in _BLOCK_FAMILIES[block.kind])
    return tags


def _frame_vector(dr: DamekRicciAlgebra, frame: AdaptedFrame, tag: JacobiTag) -> np.ndarray:
    family, i = tag
    if family == "U":
        return dr.embed_v(frame.U[i - 1])
    if family == "eta":
        return dr.embed_v(frame.H[i - 1])
    if family == "Pbar":
        return dr.embed_v(frame.pbar_of(i))
    if family == "Fbar":
        return dr.embed_v(frame.fbar_of(i))
    if family == "Z":
        return dr.embed_z(frame.zbasis[i - 1])
    return dr.B


def tangent_rows(dr: DamekRicciAlgebra, frame: AdaptedFrame, r: float) -> np.ndarray:
    """Orthonormal basis of γ'(r)^⊥ in block order, one vector per row."""
    rows = np.vstack([_frame_vector(dr, frame, tag) for tag in domain_tags(frame)])
    rows[0] = dr.B / np.cosh(r / 2) + np.tanh(r / 2) * dr.embed_v(frame.xi)
    return rows


def _generic_blocks(r: float, phi: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """C, E and closed-form S on (P̄_iξ, F̄_iξ, Z_i) for the angle phi."""
    s, c = np.sinh(r / 2), np.cosh(r / 2)
    t, sech = s / c, 1.0 / c
    sin, cos = np.sin(phi), np.cos(phi)
    C = np.array([
        [c, 0.0, 0.0],
        [0.0, 2 * s, cos * s],
        [-sin * np.sinh(r), -2 * cos * s ** 2, 1 + sin ** 2 * s ** 2],
    ])
    E = 0.5 * np.array([
        [
            (2 - np.cos(2 * phi)) * s,
            2 * np.sin(2 * phi) * s ** 3 / np.sinh(r),
            -sin * sech * (1 + sin ** 2 * s ** 2),
        ],
        [
            np.sin(2 * phi) * s,
            2 * c * (1 + cos ** 2 * t ** 2),
            cos ** 3 * s * t,
        ],
        [
            sin * (1 - 2 * np.cosh(r)),
            2 * cos * (t - np.sinh(r)),
            sin ** 2 * np.sinh(r) + cos ** 2 * t,
        ],
    ])
    S = np.array([
        [0.5 * t, 0.0, -0.5 * sin * sech],
        [0.0, 0.5 / t, -0.5 * cos * sech],
        [-0.5 * sin * sech, -0.5 * cos * sech, t],
    ])
    return C, E, S


def _block_matrices(r: float, kind: str, phi: float) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    # 𝔉 blocks are the φ = 0 case and 𝔓 blocks the φ = pi/2 case of 𝔐
    if kind == "F":
        phi = 0.0
    elif kind == "P":
        phi = np.pi / 2
    keep = _BLOCK_SLICES[kind]
    return tuple(matrix[np.ix_(keep, keep)] for matrix in _generic_blocks(r, phi))


@dataclass
class TubeOperators:
    """C(r), E(r) and S^r in the block bases of a frame."""

    r: float
    frame: AdaptedFrame
    C: np.ndarray
    E: np.ndarray
    S: np.ndarray
    layout: List[Block] = field(default_factory=list)

    @property
    def det_C(self) -> float:
        """Determinant of C(r)."""
        return float(np.linalg.det(self.C))

    @property
    def trace(self) -> float:
        """Mean curvature (trace of S^r)."""
        return float(np.trace(self.S))

    def eigenvalues(self) -> np.ndarray:
        """Ascending principal curvatures."""
        return eigvalsh(self.S)

    def block(self, kind: str, index: int = 0) -> np.ndarray:
        """Diagonal block of S^r."""
        for item in self.layout:
            if item.kind == kind and item.index == index:
                return self.S[item.start:item.stop, item.start:item.stop]
        raise KeyError(f"No block {kind}{index or ''} in layout")

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the operators and block layout."""
        return {
            "r": self.r,
            "C": self.C.tolist(),
            "E": self.E.tolist(),
            "S": self.S.tolist(),
            "layout": [
                {"kind": b.kind, "index": b.index, "start": b.start, "size": b.size}
                for b in self.layout
            ],
        }


def _symmetrized(S: np.ndarray, tol: float) -> np.ndarray:
    asymmetry = float(np.max(np.abs(S - S.T))) if S.size else 0.0
    scale = max(1.0, float(np.max(np.abs(S)))) if S.size else 1.0
    if asymmetry > tol * scale:
        raise ShapeOperatorError(f"Shape operator is not symmetric (asymmetry {asymmetry:.2e})")
    return 0.5 * (S + S.T)


def closed_shape_operator(r: float, frame: AdaptedFrame) -> np.ndarray:
    """S^r assembled from the closed-form blocks."""
    _check_radius(r)
    blocks = []
    for block in block_layout(frame):
        if block.kind == "BU":
            blocks.append(0.5 * np.tanh(r / 2) * np.eye(block.size))
        elif block.kind == "H":
            blocks.append(0.5 / np.tanh(r / 2) * np.eye(block.size))
        else:
            blocks.append(_block_matrices(r, block.kind, frame.angles[block.index - 1])[2])
    return block_diag(*blocks)


def fundamental_operators(
    r: float, frame: AdaptedFrame, tol: Optional[Tolerances] = None
) -> TubeOperators:
    """
    Assemble C(r) and E(r) blockwise and form S^r = E C^{-1}.

    Args:
        r: Tube radius
        frame: Adapted frame at ξ
        tol: Tolerances (symmetry and sampled agreement)

    Returns:
        TubeOperators

    Raises:
        ValueError: If r <= 0
        ShapeOperatorError: If S^r is not symmetric or disagrees with the
            closed-form blocks
    """
    _check_radius(r)
    tol = tol or DEFAULT_TOLERANCES
    c_blocks, e_blocks = [], []
    for block in block_layout(frame):
        if block.kind == "BU":
            c_blocks.append(np.cosh(r / 2) * np.eye(block.size))
            e_blocks.append(0.5 * np.sinh(r / 2) * np.eye(block.size))
        elif block.kind == "H":
            c_blocks.append(2 * np.sinh(r / 2) * np.eye(block.size))
            e_blocks.append(np.cosh(r / 2) * np.eye(block.size))
        else:
            C, E, _ = _block_matrices(r, block.kind, frame.angles[block.index - 1])
            c_blocks.append(C)
            e_blocks.append(E)
    C, E = block_diag(*c_blocks), block_diag(*e_blocks)
    S = _symmetrized(solve(C.T, E.T).T, tol.symmetry)
    closed = closed_shape_operator(r, frame)
    residual = float(np.max(np.abs(S - closed)))
    if residual > tol.symmetry * max(1.0, float(np.max(np.abs(closed)))):
        raise ShapeOperatorError(f"E C^-1 disagrees with the closed form (residual {residual:.2e})")
    return TubeOperators(r=r, frame=frame, C=C, E=E, S=S, layout=block_layout(frame))


def jacobi_operators(
    dr: DamekRicciAlgebra, frame: AdaptedFrame, r: float, tol: Optional[Tolerances] = None
) -> TubeOperators:
    """
    C(r) and E(r) evaluated from the Jacobi fields and the connection.

    Column j of C is ζ_{v_j}(r) and column j of E is the tangential part of
    ζ'_{v_j}(r), both in the tangent basis at γ(r).

    Args:
        dr: Damek-Ricci algebra
        frame: Adapted frame at ξ
        r: Tube radius
        tol: Tolerances (symmetry check)

    Returns:
        TubeOperators

    Raises:
        ValueError: If r <= 0
        ShapeOperatorError: If S^r is not symmetric
    """
    _check_radius(r)
    tol = tol or DEFAULT_TOLERANCES
    basis = tangent_rows(dr, frame, r)
    values, derivatives = [], []
    for tag in domain_tags(frame):
        value, derivative, _ = field_derivatives(dr, closed_jacobi_field(dr, frame, tag), r)
        values.append(value)
        derivatives.append(derivative)
    C = basis @ np.column_stack(values)
    E = basis @ np.column_stack(derivatives)
    S = _symmetrized(solve(C.T, E.T).T, tol.symmetry)
    return TubeOperators(r=r, frame=frame, C=C, E=E, S=S, layout=block_layout(frame))


def det_c_closed(r: float, frame: AdaptedFrame) -> float:
    """2^(h+m2) cosh(r/2)^(2+l+3m-m1) sinh(r/2)^(h+m2)."""
    _check_radius(r)
    h, l, m = frame.h, frame.l, frame.m
    m1, m2 = frame.profile.m1, frame.profile.m2
    return float(
        2.0 ** (h + m2) * np.cosh(r / 2) ** (2 + l + 3 * m - m1) * np.sinh(r / 2) ** (h + m2)
    )


@dataclass(frozen=True)
class TubeDimensions:
    """Dimension data entering the mean curvature."""

    k: int  # codimension of S_𝔴
    dim_s: int  # dimension of S_𝔴
    m: int  # dimension of 𝔷

    @property
    def w_dim(self) -> int:
        """Dimension of 𝔴."""
        return self.dim_s - 1 - self.m

    @classmethod
    def from_subspace(cls, wperp: Subspace) -> "TubeDimensions":
        """Dimensions of S_𝔴 for a given 𝔴⊥."""
        m = wperp.ambient.z_dim
        return cls(k=wperp.k, dim_s=1 + (wperp.n - wperp.k) + m, m=m)


def mean_curvature(r: float, dims: TubeDimensions) -> float:
    """
    Mean curvature of the tube of radius r around S_𝔴.

    1/2 ((k - 1) coth(r/2) + (dim S_𝔴 + m) tanh(r/2)), independent of ξ.
    """
    _check_radius(r)
    return 0.5 * (
        (dims.k - 1) / np.tanh(r / 2) + (dims.dim_s + dims.m) * np.tanh(r / 2)
    )


@dataclass
class CharacteristicPolynomial:
    """Factored det(S^r - x id)."""

    r: float
    factors: List[Tuple[str, Polynomial, int]]  # (label, factor, power)

    @property
    def lam(self) -> float:
        """λ = 1/2 tanh(r/2)."""
        return 0.5 * np.tanh(self.r / 2)

    def expand(self) -> Polynomial:
        """Product of the factors."""
        product = Polynomial([1.0])
        for _, factor, power in self.factors:
            product = product * factor ** power
        return product

    def roots(self) -> np.ndarray:
        """Ascending real parts of the roots of each factor, with multiplicity."""
        found = []
        for _, factor, power in self.factors:
            found.extend(list(np.real(factor.roots())) * power)
        return np.sort(np.array(found))

    def normalized_coefficients(self) -> np.ndarray:
        """Ascending coefficients of the expanded polynomial divided by the leading one."""
        coef = self.expand().coef
        return coef / coef[-1]

    def to_dict(self) -> Dict[str, Any]:
        """Serialize factors by ascending coefficients."""
        return {
            "r": self.r,
            "lambda": self.lam,
            "factors": [
                {"label": label, "coefficients": factor.coef.tolist(), "power": power}
                for label, factor, power in self.factors
            ],
        }


def characteristic_polynomial(
    r: float, profile: KahlerProfile, dims: TubeDimensions
) -> CharacteristicPolynomial:
    """
    Characteristic polynomial of S^r from the angles and dimensions.

    Args:
        r: Tube radius
        profile: Generalized Kähler angle of ξ
        dims: Dimensions of S_𝔴

    Returns:
        CharacteristicPolynomial with factors (λ - x)^(l+1), (1/(4λ) - x)^h
        and one quadratic or cubic q^i per center direction

    Raises:
        ValueError: If r <= 0
    """
    _check_radius(r)
    lam = 0.5 * np.tanh(r / 2)
    m1, m2, m = profile.m1, profile.m2, profile.m
    l = dims.w_dim - (m - m1 + 1)  # noqa: E741
    h = dims.k - 1 - m2
    factors: List[Tuple[str, Polynomial, int]] = [("lambda", Polynomial([lam, -1.0]), l + 1)]
    if h:
        factors.append(("coth", Polynomial([1.0 / (4 * lam), -1.0]), h))
    for i, phi in enumerate(profile.angles, start=1):
        if i < m1:
            q = Polynomial([0.25 + lam ** 2, -(2 * lam + 1.0 / (4 * lam)), 1.0])
        elif i <= m2:
            constant = (
                16 * lam ** 4 + 16 * lam ** 2 - 1 + (4 * lam ** 2 - 1) ** 2 * np.cos(2 * phi)
            ) / (32 * lam)
            q = Polynomial([constant, -0.5 * (6 * lam ** 2 + 1), 3 * lam + 1.0 / (4 * lam), -1.0])
        else:
            q = Polynomial([3 * lam ** 2 - 0.25, -3 * lam, 1.0])
        factors.append((f"q{i}", q, 1))
    return CharacteristicPolynomial(r=r, factors=factors)


def numeric_characteristic_polynomial(S: np.ndarray) -> Polynomial:
    """det(S - x id) from the eigenvalues of S."""
    eigenvalues = eigvalsh(S)
    sign = -1.0 if len(eigenvalues) % 2 else 1.0
    return Polynomial(sign * np.poly(eigenvalues)[::-1])


@dataclass
class TubeSpectrum:
    """Principal curvatures of the tube at γ(r) for one unit normal ξ."""

    xi: np.ndarray
    angles: np.ndarray
    eigenvalues: np.ndarray
    trace: float
    m1: int
    m2: int

    def to_dict(self) -> Dict[str, Any]:
        """Serialize one sample."""
        return {
            "xi": self.xi.tolist(),
            "angles": self.angles.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "trace": self.trace,
            "m1": self.m1,
            "m2": self.m2,
        }


def tube_spectrum(
    dr: DamekRicciAlgebra,
    wperp: Subspace,
    xi: np.ndarray,
    r: float,
    tol: Optional[Tolerances] = None,
) -> TubeSpectrum:
    """Principal curvatures at γ(r) from the Jacobi-field operators."""
    tol = tol or DEFAULT_TOLERANCES
    profile = generalized_kahler_angle(dr.htype, wperp, xi, tol.angle)
    frame = adapted_frame(dr.htype, wperp, xi, profile=profile)
    operators = jacobi_operators(dr, frame, r, tol)
    return TubeSpectrum(
        xi=np.asarray(xi, dtype=float),
        angles=profile.angles,
        eigenvalues=operators.eigenvalues(),
        trace=operators.trace,
        m1=profile.m1,
        m2=profile.m2,
    )


@dataclass
class SpectrumScanReport:
    """Principal curvatures over sampled unit normals at one radius."""

    r: float
    spectra: List[TubeSpectrum]
    constant: bool
    spread: float
    mean_curvature: float
    trace_residual: float
    angles_constant: bool
    angle_deviation: float

    @property
    def biconditional_holds(self) -> bool:
        """Constant principal curvatures exactly when the Kähler angle is constant."""
        return self.constant == self.angles_constant

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {r, samples, constant, spread, ...}."""
        return {
            "r": self.r,
            "samples": [spectrum.to_dict() for spectrum in self.spectra],
            "constant": self.constant,
            "spread": self.spread,
            "mean_curvature": self.mean_curvature,
            "trace_residual": self.trace_residual,
            "angles_constant": self.angles_constant,
            "angle_deviation": self.angle_deviation,
            "biconditional_holds": self.biconditional_holds,
        }


def tube_spectrum_scan(
    dr: DamekRicciAlgebra,
    wperp: Subspace,
    r: float,
    sampler: Iterable[np.ndarray],
    tol: Optional[Tolerances] = None,
    workers: int = 1,
    progress_callback: Optional[ProgressCallback] = None,
) -> SpectrumScanReport:
    """
    Decide whether the tube of radius r has constant principal curvatures.

    Spectra are computed per sample (in parallel when workers > 1) and
    merged in sample order. The result is cross-checked against the
    constancy of the generalized Kähler angle on the same samples.

    Args:
        dr: Damek-Ricci algebra
        wperp: Subspace 𝔴⊥
        r: Tube radius
        sampler: Unit vectors of 𝔴⊥
        tol: Tolerances (spectrum constancy, angle constancy)
        workers: Number of worker threads
        progress_callback: Called as (done, total, label) after each sample

    Returns:
        SpectrumScanReport

    Raises:
        ValueError: If r <= 0 or the sampler is empty
    """
    _check_radius(r)
    tol = tol or DEFAULT_TOLERANCES
    samples = [np.asarray(xi, dtype=float) for xi in sampler]
    if not samples:
        raise ValueError("Sampler produced no unit vectors")
    total = len(samples)
    logger.info(f"Scanning tube spectrum at r={r} over {total} samples")

    def compute(index: int) -> TubeSpectrum:
        return tube_spectrum(dr, wperp, samples[index], r, tol)

    spectra: List[TubeSpectrum] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map preserves submission order
            for done, spectrum in enumerate(pool.map(compute, range(total)), start=1):
                spectra.append(spectrum)
                if progress_callback:
                    progress_callback(done, total, f"r={r}")
    else:
        for index in range(total):
            spectra.append(compute(index))
            if progress_callback:
                progress_callback(index + 1, total, f"r={r}")

    eigenvalues = np.vstack([s.eigenvalues for s in spectra])
    spread = float(np.max(np.ptp(eigenvalues, axis=0)))
    expected = mean_curvature(r, TubeDimensions.from_subspace(wperp))
    trace_residual = float(max(abs(s.trace - expected) for s in spectra))
    angle_report = constant_angle_report(dr.htype, wperp, samples, tol.constant, tol.angle)

    report = SpectrumScanReport(
        r=r,
        spectra=spectra,
        constant=spread <= tol.spectrum,
        spread=spread,
        mean_curvature=expected,
        trace_residual=trace_residual,
        angles_constant=angle_report.constant,
        angle_deviation=angle_report.max_deviation,
    )
    if not report.biconditional_holds:
        logger.error(
            f"r={r}: principal curvatures {'constant' if report.constant else 'vary'} "
            f"but Kähler angle {'constant' if report.angles_constant else 'varies'}"
        )
    logger.info(
        f"r={r}: {'constant' if report.constant else 'non-constant'} principal curvatures "
        f"(spread {spread:.3e}, mean curvature {expected:.6f})"
    )
    return report
