"""
Damek-Ricci Spaces.

Lie bracket, Levi-Civita connection and curvature of the metric solvable
algebra 𝔞 ⊕ 𝔳 ⊕ 𝔷, evaluated on left-invariant vector fields, together
with the unit speed geodesic through the identity with initial velocity
ξ in 𝔳.
"""

import logging
from typing import Dict, Optional

import numpy as np

from drisoparam.core.exceptions import DimensionMismatchError
from drisoparam.geometry.clifford import j_matrix, v_bracket
from drisoparam.geometry.models import DamekRicciAlgebra, HTypeAlgebra, VectorLike

logger = logging.getLogger(__name__)


def build_damek_ricci(htype: HTypeAlgebra) -> DamekRicciAlgebra:
    """Solvable extension of an H-type algebra."""
    dr = DamekRicciAlgebra(htype=htype)
    logger.debug(f"Damek-Ricci algebra of dimension {dr.dim} (n={dr.n}, m={dr.m})")
    return dr


def dr_bracket(dr: DamekRicciAlgebra, a: VectorLike, b: VectorLike) -> np.ndarray:
    """
    Lie bracket [rB + U + X, sB + V + Y] = [U,V] + r/2 V - s/2 U + rY - sX.

    Args:
        dr: Damek-Ricci algebra
        a: First vector
        b: Second vector

    Returns:
        Coordinates of the bracket
    """
    x, y = dr.split(a), dr.split(b)
    out = np.zeros(dr.dim)
    out[dr.v_slice] = 0.5 * x.r * y.U - 0.5 * y.r * x.U
    out[dr.z_slice] = v_bracket(dr.htype, x.U, y.U) + x.r * y.X - y.r * x.X
    return out


def levi_civita(dr: DamekRicciAlgebra, field: VectorLike, direction: VectorLike) -> np.ndarray:
    """
    Covariant derivative of one left-invariant field along another.

    With direction sB + V + Y and field rB + U + X:
    ∇ = -1/2 J_X V - 1/2 J_Y U - 1/2 rV - 1/2 [U,V] - rY + (1/2 <U,V> + <X,Y>) B.

    Args:
        dr: Damek-Ricci algebra
        field: Field being differentiated
        direction: Direction of differentiation

    Returns:
        Coordinates of ∇_direction field
    """
    f, d = dr.split(field), dr.split(direction)
    alg = dr.htype
    out = np.zeros(dr.dim)
    out[0] = 0.5 * (f.U @ d.U) + f.X @ d.X
    out[dr.v_slice] = (
        -0.5 * j_matrix(alg, f.X) @ d.U - 0.5 * j_matrix(alg, d.X) @ f.U - 0.5 * f.r * d.U
    )
    out[dr.z_slice] = -0.5 * v_bracket(alg, f.U, d.U) - f.r * d.X
    return out


def connection_matrix(dr: DamekRicciAlgebra, direction: VectorLike) -> np.ndarray:
    """Matrix of Y -> ∇_direction Y in the coordinate basis."""
    direction = dr.coords(direction)
    basis = np.eye(dr.dim)
    return np.column_stack([levi_civita(dr, basis[j], direction) for j in range(dr.dim)])


def curvature(
    dr: DamekRicciAlgebra, w1: VectorLike, w2: VectorLike, w3: VectorLike
) -> np.ndarray:
    """
    Curvature R(w1, w2)w3 = ∇_{w1}∇_{w2}w3 - ∇_{w2}∇_{w1}w3 - ∇_{[w1,w2]}w3.

    Args:
        dr: Damek-Ricci algebra
        w1: First vector
        w2: Second vector
        w3: Vector acted on

    Returns:
        Coordinates of R(w1, w2)w3
    """
    w1, w2, w3 = dr.coords(w1), dr.coords(w2), dr.coords(w3)
    return (
        levi_civita(dr, levi_civita(dr, w3, w2), w1)
        - levi_civita(dr, levi_civita(dr, w3, w1), w2)
        - levi_civita(dr, w3, dr_bracket(dr, w1, w2))
    )


def curvature_operator_matrix(
    dr: DamekRicciAlgebra, x: VectorLike, y: VectorLike
) -> np.ndarray:
    """Matrix of a -> R(a, x)y in the coordinate basis."""
    x, y = dr.coords(x), dr.coords(y)
    basis = np.eye(dr.dim)
    return np.column_stack([curvature(dr, basis[j], x, y) for j in range(dr.dim)])


def _check_unit_v(dr: DamekRicciAlgebra, xi: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (dr.n,):
        raise DimensionMismatchError(f"ξ has shape {xi.shape}, expected ({dr.n},)")
    norm = float(np.linalg.norm(xi))
    if abs(norm - 1.0) > tol:
        raise ValueError(f"ξ must be a unit vector, |ξ| = {norm}")
    return xi


def geodesic_velocity(dr: DamekRicciAlgebra, xi: np.ndarray, t: float) -> np.ndarray:
    """
    Left-invariant coordinates of the velocity of the unit speed geodesic
    with initial velocity ξ in 𝔳: sech(t/2) ξ - tanh(t/2) B.

    Args:
        dr: Damek-Ricci algebra
        xi: Unit 𝔳-vector
        t: Arc length

    Returns:
        Coordinates of γ'(t)

    Raises:
        ValueError: If ξ is not a unit vector
    """
    xi = _check_unit_v(dr, xi)
    out = np.zeros(dr.dim)
    out[0] = -np.tanh(t / 2.0)
    out[dr.v_slice] = xi / np.cosh(t / 2.0)
    return out


def geodesic_velocity_derivative(dr: DamekRicciAlgebra, xi: np.ndarray, t: float) -> np.ndarray:
    """Derivative in t of the coefficients returned by geodesic_velocity."""
    xi = _check_unit_v(dr, xi)
    sech = 1.0 / np.cosh(t / 2.0)
    out = np.zeros(dr.dim)
    out[0] = -0.5 * sech ** 2
    out[dr.v_slice] = -0.5 * sech * np.tanh(t / 2.0) * xi
    return out


def geodesic_residual(
    dr: DamekRicciAlgebra, xi: np.ndarray, times: np.ndarray, step: float = 1e-5
) -> float:
    """
    Largest norm of ∇_{γ'}γ' along the geodesic, coefficient derivatives
    taken by central differences.

    Args:
        dr: Damek-Ricci algebra
        xi: Unit 𝔳-vector
        times: Sample times
        step: Finite difference step

    Returns:
        Largest residual norm
    """
    worst = 0.0
    for t in np.atleast_1d(times):
        velocity = geodesic_velocity(dr, xi, t)
        derivative = (
            geodesic_velocity(dr, xi, t + step) - geodesic_velocity(dr, xi, t - step)
        ) / (2.0 * step)
        residual = derivative + levi_civita(dr, velocity, velocity)
        worst = max(worst, float(np.linalg.norm(residual)))
    return worst


def _random_vector(dr: DamekRicciAlgebra, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(dr.dim)


def connection_residuals(
    dr: DamekRicciAlgebra, rng: np.random.Generator, draws: int = 16
) -> Dict[str, float]:
    """
    Largest residuals of metric compatibility and torsion freeness.

    For left-invariant fields these read <∇_Z X, Y> + <X, ∇_Z Y> = 0 and
    ∇_X Y - ∇_Y X = [X, Y].
    """
    worst = {"metric": 0.0, "torsion": 0.0}
    for _ in range(draws):
        x, y, z = (_random_vector(dr, rng) for _ in range(3))
        metric = levi_civita(dr, x, z) @ y + x @ levi_civita(dr, y, z)
        torsion = levi_civita(dr, y, x) - levi_civita(dr, x, y) - dr_bracket(dr, x, y)
        worst["metric"] = max(worst["metric"], abs(float(metric)))
        worst["torsion"] = max(worst["torsion"], float(np.max(np.abs(torsion))))
    return worst


def curvature_residuals(
    dr: DamekRicciAlgebra, rng: np.random.Generator, draws: int = 16
) -> Dict[str, float]:
    """
    Largest residuals of the curvature symmetries and the Bianchi identity.

    Checked on random vectors: antisymmetry in the first and in the last
    pair, pair symmetry and the first Bianchi identity; the Jacobi identity
    of the bracket is included.
    """
    worst = {
        "antisymmetry": 0.0,
        "skew_adjoint": 0.0,
        "pair_symmetry": 0.0,
        "bianchi": 0.0,
        "jacobi": 0.0,
    }
    for _ in range(draws):
        x, y, z, w = (_random_vector(dr, rng) for _ in range(4))
        rxyz = curvature(dr, x, y, z)
        entries = {
            "antisymmetry": np.max(np.abs(rxyz + curvature(dr, y, x, z))),
            "skew_adjoint": abs(rxyz @ w + curvature(dr, x, y, w) @ z),
            "pair_symmetry": abs(rxyz @ w - curvature(dr, z, w, x) @ y),
            "bianchi": np.max(np.abs(rxyz + curvature(dr, y, z, x) + curvature(dr, z, x, y))),
            "jacobi": np.max(np.abs(
                dr_bracket(dr, x, dr_bracket(dr, y, z))
                + dr_bracket(dr, y, dr_bracket(dr, z, x))
                + dr_bracket(dr, z, dr_bracket(dr, x, y))
            )),
        }
        for key, value in entries.items():
            worst[key] = max(worst[key], float(value))
    return worst


def curvature_identity_residuals(
    dr: DamekRicciAlgebra, rng: np.random.Generator, draws: int = 16
) -> Dict[str, float]:
    """
    Largest residuals of the closed curvature formulas for unit U, V in 𝔳
    and unit Z in 𝔷.

    R(U,Z)B = ¼J_ZU, R(B,Z)B = Z, R(U,V)V = ¼(<U,V>V - U + 3J_[U,V]V),
    R(U,V)B = ½[U,V], R(B,U)B = ¼U, R(U,B)V = ¼<U,V>B + ¼[U,V],
    R(B,Z)U = ½J_ZU, R(U,Z)U = ¼Z, R(U,B)U = ¼B.
    """
    alg = dr.htype
    B = dr.B
    worst: Dict[str, float] = {}
    for _ in range(draws):
        U = rng.standard_normal(dr.n)
        V = rng.standard_normal(dr.n)
        Z = rng.standard_normal(dr.m)
        U, V, Z = U / np.linalg.norm(U), V / np.linalg.norm(V), Z / np.linalg.norm(Z)
        u, v, z = dr.embed_v(U), dr.embed_v(V), dr.embed_z(Z)
        bracket = v_bracket(alg, U, V)
        jzu = dr.embed_v(j_matrix(alg, Z) @ U)
        expected = {
            "R(U,Z)B": (curvature(dr, u, z, B), 0.25 * jzu),
            "R(B,Z)B": (curvature(dr, B, z, B), z),
            "R(U,V)V": (
                curvature(dr, u, v, v),
                0.25 * ((U @ V) * v - u + 3.0 * dr.embed_v(j_matrix(alg, bracket) @ V)),
            ),
            "R(U,V)B": (curvature(dr, u, v, B), 0.5 * dr.embed_z(bracket)),
            "R(B,U)B": (curvature(dr, B, u, B), 0.25 * u),
            "R(U,B)V": (
                curvature(dr, u, B, v), 0.25 * (U @ V) * B + 0.25 * dr.embed_z(bracket)
            ),
            "R(B,Z)U": (curvature(dr, B, z, u), 0.5 * jzu),
            "R(U,Z)U": (curvature(dr, u, z, u), 0.25 * z),
            "R(U,B)U": (curvature(dr, u, B, u), 0.25 * B),
        }
        for key, (value, target) in expected.items():
            worst[key] = max(worst.get(key, 0.0), float(np.max(np.abs(value - target))))
    return worst


def sectional_curvature(
    dr: DamekRicciAlgebra, x: VectorLike, y: VectorLike, tol: Optional[float] = None
) -> float:
    """Sectional curvature of the plane spanned by x and y."""
    x, y = dr.coords(x), dr.coords(y)
    area = (x @ x) * (y @ y) - (x @ y) ** 2
    if area <= (tol if tol is not None else 1e-14):
        raise ValueError("Vectors span a degenerate plane")
    return float(curvature(dr, x, y, y) @ x / area)
