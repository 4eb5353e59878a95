"""
Jacobi Fields Along Normal Geodesics.

S_𝔴-Jacobi fields ζ_v along the geodesic γ with γ(0) on S_𝔴 and
γ'(0) = ξ, in closed form and by numerical integration. Fields are
handled through their coefficients a(t) in the left-invariant frame; for
such a field ζ' = a' + ∇_{γ'}a (coefficient rule), so ζ'' and the
Jacobi equation ζ'' + R(ζ, γ')γ' = 0 reduce to linear algebra.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, NamedTuple, Tuple

import numpy as np

from drisoparam.geometry.damek_ricci import (
    connection_matrix,
    curvature,
    curvature_operator_matrix,
    geodesic_velocity,
    geodesic_velocity_derivative,
    levi_civita,
)
from drisoparam.geometry.models import AdaptedFrame, DamekRicciAlgebra, Subspace

logger = logging.getLogger(__name__)

FAMILIES = ("B", "U", "eta", "Pbar", "Fbar", "Z")


class JacobiTag(NamedTuple):
    """Family and 1-based index of a frame vector (index unused for B)."""

    family: str
    index: int = 0


# value, first and second derivative of the scalar coefficients
_Profile = Callable[[float], Tuple[float, float, float]]

_PROFILES: Dict[str, _Profile] = {
    "one": lambda t: (1.0, 0.0, 0.0),
    "sinh_half": lambda t: (np.sinh(t / 2), 0.5 * np.cosh(t / 2), 0.25 * np.sinh(t / 2)),
    "cosh_half": lambda t: (np.cosh(t / 2), 0.5 * np.sinh(t / 2), 0.25 * np.cosh(t / 2)),
    "sinh": lambda t: (np.sinh(t), np.cosh(t), np.sinh(t)),
    "sinh_half_sq": lambda t: (np.sinh(t / 2) ** 2, 0.5 * np.sinh(t), 0.5 * np.cosh(t)),
}


@dataclass(frozen=True, eq=False)
class JacobiTerm:
    """Left-invariant vector times scale * profile(t)."""

    vector: np.ndarray
    scale: float
    profile: str


@dataclass(frozen=True, eq=False)
class ClosedJacobiField:
    """Jacobi field given as a finite sum of left-invariant terms."""

    tag: JacobiTag
    terms: Tuple[JacobiTerm, ...]
    xi: np.ndarray
    vector: np.ndarray  # frame vector v the field is attached to

    def coefficients(self, t: float, order: int = 0) -> np.ndarray:
        """Frame coefficients a(t), a'(t) or a''(t)."""
        out = np.zeros_like(self.terms[0].vector)
        for term in self.terms:
            out = out + term.scale * _PROFILES[term.profile](t)[order] * term.vector
        return out

    def value(self, t: float) -> np.ndarray:
        """ζ(t) in left-invariant coordinates."""
        return self.coefficients(t)


def closed_jacobi_field(
    dr: DamekRicciAlgebra, frame: AdaptedFrame, tag: JacobiTag
) -> ClosedJacobiField:
    """
    Closed form of the Jacobi field with initial value the frame vector `tag`.

    Args:
        dr: Damek-Ricci algebra
        frame: Adapted frame at ξ
        tag: Family and index of the frame vector

    Returns:
        ClosedJacobiField

    Raises:
        ValueError: If the tag is unknown or its index is out of range
    """
    family, i = tag
    profile = frame.profile
    xi = dr.embed_v(frame.xi)

    def z_vec(j: int) -> np.ndarray:
        return dr.embed_z(frame.zbasis[j - 1])

    def check(low: int, high: int) -> None:
        if not low <= i <= high:
            raise ValueError(f"Index {i} of family {family} outside {low}..{high}")

    if family == "B":
        vector = dr.B
        terms = [JacobiTerm(vector, 1.0, "one"), JacobiTerm(xi, 1.0, "sinh_half")]
    elif family == "U":
        check(1, frame.l)
        vector = dr.embed_v(frame.U[i - 1])
        terms = [JacobiTerm(vector, 1.0, "cosh_half")]
    elif family == "eta":
        check(1, frame.h)
        vector = dr.embed_v(frame.H[i - 1])
        terms = [JacobiTerm(vector, 2.0, "sinh_half")]
    elif family == "Pbar":
        check(profile.m1, frame.m)
        vector = dr.embed_v(frame.pbar_of(i))
        sin_phi = np.sin(frame.angles[i - 1])
        terms = [
            JacobiTerm(vector, 1.0, "cosh_half"),
            JacobiTerm(z_vec(i), -sin_phi, "sinh"),
        ]
    elif family == "Fbar":
        check(1, profile.m2)
        vector = dr.embed_v(frame.fbar_of(i))
        cos_phi = np.cos(frame.angles[i - 1])
        terms = [
            JacobiTerm(vector, 2.0, "sinh_half"),
            JacobiTerm(z_vec(i), -2.0 * cos_phi, "sinh_half_sq"),
        ]
    elif family == "Z":
        check(1, frame.m)
        vector = z_vec(i)
        sin_phi = np.sin(frame.angles[i - 1])
        terms = [
            JacobiTerm(dr.embed_v(frame.fproj[i - 1]), 1.0, "sinh_half"),
            JacobiTerm(z_vec(i), 1.0, "one"),
            JacobiTerm(z_vec(i), sin_phi ** 2, "sinh_half_sq"),
        ]
    else:
        raise ValueError(f"Unknown Jacobi field family '{family}' (expected one of {FAMILIES})")
    return ClosedJacobiField(
        tag=JacobiTag(family, i), terms=tuple(terms), xi=frame.xi, vector=vector
    )


def jacobi_closed(
    dr: DamekRicciAlgebra, frame: AdaptedFrame, tag: JacobiTag, t: float
) -> np.ndarray:
    """Value ζ_v(t) of the closed-form Jacobi field for the frame vector `tag`."""
    return closed_jacobi_field(dr, frame, tag).value(t)


def covariant_derivative(
    dr: DamekRicciAlgebra, xi: np.ndarray, a: np.ndarray, da: np.ndarray, t: float
) -> np.ndarray:
    """ζ' = a' + ∇_{γ'(t)} a for a field with frame coefficients a and a'."""
    return da + levi_civita(dr, a, geodesic_velocity(dr, xi, t))


def field_derivatives(
    dr: DamekRicciAlgebra, field: ClosedJacobiField, t: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """ζ(t), ζ'(t) and ζ''(t) of a closed-form field."""
    a, da, dda = (field.coefficients(t, order) for order in range(3))
    g = geodesic_velocity(dr, field.xi, t)
    dg = geodesic_velocity_derivative(dr, field.xi, t)
    b = da + levi_civita(dr, a, g)
    db = dda + levi_civita(dr, a, dg) + levi_civita(dr, da, g)
    return a, b, db + levi_civita(dr, b, g)


def jacobi_residual(dr: DamekRicciAlgebra, field: ClosedJacobiField, t: float) -> float:
    """Norm of ζ'' + R(ζ, γ')γ' at time t."""
    value, _, second = field_derivatives(dr, field, t)
    g = geodesic_velocity(dr, field.xi, t)
    return float(np.linalg.norm(second + curvature(dr, value, g, g)))


def _normal_split(
    dr: DamekRicciAlgebra, wperp: Subspace, xi: np.ndarray, v: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """Split v ⊥ ξ into its 𝔰_𝔴 part and its 𝔴⊥ ⊖ Rξ part."""
    normal = np.zeros(dr.dim)
    normal[dr.v_slice] = wperp.projector @ v[dr.v_slice]
    normal[dr.v_slice] -= (normal[dr.v_slice] @ xi) * xi
    along = (v[dr.v_slice] @ xi) * xi
    tangent = v - normal - dr.embed_v(along)
    return tangent, normal


def initial_conditions(
    dr: DamekRicciAlgebra, wperp: Subspace, xi: np.ndarray, v: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """ζ(0) = v^⊤ and ζ'(0) = -S_ξ v^⊤ + v^⊥ for a vector v orthogonal to ξ."""
    tangent, normal = _normal_split(dr, wperp, xi, dr.coords(v))
    derivative = levi_civita(dr, dr.embed_v(xi), tangent)
    # -S_ξ v^⊤ is the 𝔰_𝔴 part of ∇_{v^⊤} ξ
    derivative_tangent, _ = _normal_split(dr, wperp, xi, derivative)
    return tangent, derivative_tangent + normal


@dataclass
class JacobiTrajectory:
    """Numerical Jacobi fields on a uniform time grid (one field per column)."""

    times: np.ndarray  # (T,)
    values: np.ndarray  # (T, dim, K) frame coefficients of ζ
    derivatives: np.ndarray  # (T, dim, K) ζ' in the frame

    def at(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        """Values and derivatives at a grid index."""
        return self.values[index], self.derivatives[index]


def jacobi_numeric(
    dr: DamekRicciAlgebra,
    wperp: Subspace,
    xi: np.ndarray,
    v: np.ndarray,
    t_max: float = 3.0,
    step: float = 1e-3,
) -> JacobiTrajectory:
    """
    Integrate the Jacobi equation with the classical fourth-order Runge-Kutta
    scheme.

    The state is (a, b) with a the frame coefficients of ζ and b those of ζ';
    a' = b - Γ(γ')a and b' = -Γ(γ')b - R(a, γ')γ', where Γ(x) is the matrix
    of ∇_x. Several fields are integrated at once when v holds one initial
    vector per row.

    Args:
        dr: Damek-Ricci algebra
        wperp: Subspace 𝔴⊥
        xi: Unit vector of 𝔴⊥
        v: Initial vector(s) orthogonal to ξ, shape (dim,) or (K, dim)
        t_max: Final time (>= 0)
        step: Largest time step

    Returns:
        JacobiTrajectory

    Raises:
        ValueError: If step is not positive or t_max is negative
    """
    if step <= 0:
        raise ValueError(f"Integration step must be positive, got {step}")
    if t_max < 0:
        raise ValueError(f"t_max must be non-negative, got {t_max}")

    rows = np.atleast_2d(np.asarray(v, dtype=float))
    pairs = [initial_conditions(dr, wperp, xi, row) for row in rows]
    a = np.column_stack([p[0] for p in pairs])
    b = np.column_stack([p[1] for p in pairs])

    xi_c, b_c = dr.embed_v(xi), dr.B
    gamma_xi, gamma_b = connection_matrix(dr, xi_c), connection_matrix(dr, b_c)
    k_xx = curvature_operator_matrix(dr, xi_c, xi_c)
    k_mixed = curvature_operator_matrix(dr, xi_c, b_c) + curvature_operator_matrix(dr, b_c, xi_c)
    k_bb = curvature_operator_matrix(dr, b_c, b_c)

    def rhs(t: float, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        alpha, beta = 1.0 / np.cosh(t / 2), -np.tanh(t / 2)
        gamma = alpha * gamma_xi + beta * gamma_b
        jacobi = alpha ** 2 * k_xx + alpha * beta * k_mixed + beta ** 2 * k_bb
        return b - gamma @ a, -gamma @ b - jacobi @ a

    count = int(np.ceil(t_max / step - 1e-12)) if t_max > 0 else 0
    h = t_max / count if count else 0.0
    times = np.linspace(0.0, t_max, count + 1)
    values = np.empty((count + 1,) + a.shape)
    derivatives = np.empty_like(values)
    values[0], derivatives[0] = a, b

    for n in range(count):
        t = times[n]
        k1a, k1b = rhs(t, a, b)
        k2a, k2b = rhs(t + h / 2, a + h / 2 * k1a, b + h / 2 * k1b)
        k3a, k3b = rhs(t + h / 2, a + h / 2 * k2a, b + h / 2 * k2b)
        k4a, k4b = rhs(t + h, a + h * k3a, b + h * k3b)
        a = a + h / 6 * (k1a + 2 * k2a + 2 * k3a + k4a)
        b = b + h / 6 * (k1b + 2 * k2b + 2 * k3b + k4b)
        values[n + 1] = a
        derivatives[n + 1] = b

    logger.debug(f"Integrated {a.shape[1]} Jacobi field(s) over [0, {t_max}] in {count} steps")
    return JacobiTrajectory(times=times, values=values, derivatives=derivatives)


def closed_vs_numeric(
    dr: DamekRicciAlgebra,
    wperp: Subspace,
    frame: AdaptedFrame,
    tags: List[JacobiTag],
    t_max: float = 3.0,
    step: float = 1e-3,
) -> float:
    """Largest difference between numerical and closed-form fields over the grid."""
    fields = [closed_jacobi_field(dr, frame, tag) for tag in tags]
    starts = np.vstack([f.vector for f in fields])
    trajectory = jacobi_numeric(dr, wperp, frame.xi, starts, t_max, step)
    worst = 0.0
    for n, t in enumerate(trajectory.times):
        closed = np.column_stack([f.value(t) for f in fields])
        worst = max(worst, float(np.max(np.abs(trajectory.values[n] - closed))))
    return worst


def initial_condition_residual(
    dr: DamekRicciAlgebra, wperp: Subspace, field: ClosedJacobiField
) -> float:
    """Largest deviation of ζ(0), ζ'(0) from the initial conditions of the frame vector."""
    value, derivative, _ = field_derivatives(dr, field, 0.0)
    tangent, expected = initial_conditions(dr, wperp, field.xi, field.vector)
    return float(max(np.max(np.abs(value - tangent)), np.max(np.abs(derivative - expected))))


def sample_times(count: int = 50, t_max: float = 3.0) -> np.ndarray:
    """Uniform sample times in [0, t_max]."""
    return np.linspace(0.0, t_max, count)

