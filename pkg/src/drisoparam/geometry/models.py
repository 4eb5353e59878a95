"""
Geometry Data Models.

Dataclasses shared by the geometry modules. Arrays are stored read-only so
instances can be passed between threads without copying.

Vectors of 𝔳 and 𝔷 are 1-D arrays in orthonormal coordinates; families of
vectors are stored as 2-D arrays with one vector per row. Vectors of the
solvable algebra 𝔞 ⊕ 𝔳 ⊕ 𝔷 are coordinate arrays in the order (B, 𝔳, 𝔷).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Union

import numpy as np

from drisoparam.core.config import DEFAULT_TOLERANCES
from drisoparam.core.exceptions import DimensionMismatchError, SubspaceError


def _frozen(values: Any, ndim: Optional[int] = None) -> np.ndarray:
    array = np.array(values, dtype=float)
    if ndim is not None and array.ndim != ndim:
        if array.size == 0:
            array = array.reshape((0,) * (ndim - 1) + (0,))
        else:
            raise DimensionMismatchError(f"Expected a {ndim}-D array, got shape {array.shape}")
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class CliffordGenerators:
    """Generators G_1..G_m of a Clifford module structure on R^n."""

    gens: np.ndarray  # shape (m, n, n)

    def __post_init__(self) -> None:
        gens = _frozen(self.gens)
        if gens.ndim != 3 or gens.shape[1] != gens.shape[2]:
            raise DimensionMismatchError(f"Generators must have shape (m, n, n), got {gens.shape}")
        object.__setattr__(self, "gens", gens)

    @property
    def m(self) -> int:
        """Number of generators (dimension of the center)."""
        return int(self.gens.shape[0])

    @property
    def n(self) -> int:
        """Dimension of the module."""
        return int(self.gens.shape[1])

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {m, n, generators} with row-major nested lists."""
        return {"m": self.m, "n": self.n, "generators": self.gens.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CliffordGenerators":
        """Create generators from a serialized descriptor."""
        gens = np.array(data["generators"], dtype=float)
        m, n = int(data["m"]), int(data["n"])
        if gens.shape != (m, n, n):
            raise DimensionMismatchError(
                f"Descriptor declares m={m}, n={n} but holds generators of shape {gens.shape}"
            )
        return cls(gens=gens)


@dataclass(frozen=True, eq=False)
class HTypeAlgebra:
    """
    Generalized Heisenberg algebra 𝔫 = 𝔳 ⊕ 𝔷.

    The inner products on 𝔳 and 𝔷 are the standard ones; J_Z is
    sum_i z_i G_i and the bracket is fixed by <[U, V], X> = <J_X U, V>.
    """

    generators: CliffordGenerators
    name: str = ""

    @property
    def v_dim(self) -> int:
        """Dimension n of 𝔳."""
        return self.generators.n

    @property
    def z_dim(self) -> int:
        """Dimension m of 𝔷."""
        return self.generators.m

    @property
    def gens(self) -> np.ndarray:
        """Generator array of shape (m, n, n)."""
        return self.generators.gens

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the algebra descriptor."""
        data = self.generators.to_dict()
        data["name"] = self.name
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HTypeAlgebra":
        """Create an algebra from a serialized descriptor (not validated)."""
        return cls(generators=CliffordGenerators.from_dict(data), name=data.get("name", ""))


@dataclass(frozen=True, eq=False)
class AlgebraVector:
    """Structured view rB + U + X of a vector in 𝔞 ⊕ 𝔳 ⊕ 𝔷."""

    r: float
    U: np.ndarray
    X: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "U", _frozen(self.U, ndim=1))
        object.__setattr__(self, "X", _frozen(self.X, ndim=1))

    def to_array(self) -> np.ndarray:
        """Coordinates in the order (B, 𝔳, 𝔷)."""
        return np.concatenate(([self.r], self.U, self.X))


VectorLike = Union[AlgebraVector, np.ndarray]


@dataclass(frozen=True, eq=False)
class DamekRicciAlgebra:
    """Metric solvable algebra 𝔞 ⊕ 𝔳 ⊕ 𝔷 with unit vector B spanning 𝔞."""

    htype: HTypeAlgebra

    @property
    def n(self) -> int:
        """Dimension of 𝔳."""
        return self.htype.v_dim

    @property
    def m(self) -> int:
        """Dimension of 𝔷."""
        return self.htype.z_dim

    @property
    def dim(self) -> int:
        """Total dimension 1 + n + m."""
        return 1 + self.n + self.m

    @property
    def v_slice(self) -> slice:
        """Coordinate slice of 𝔳."""
        return slice(1, 1 + self.n)

    @property
    def z_slice(self) -> slice:
        """Coordinate slice of 𝔷."""
        return slice(1 + self.n, self.dim)

    @property
    def B(self) -> np.ndarray:
        """Coordinates of the unit vector B."""
        vec = np.zeros(self.dim)
        vec[0] = 1.0
        return vec

    def coords(self, vector: VectorLike) -> np.ndarray:
        """
        Coordinate array of a vector of this algebra.

        Args:
            vector: AlgebraVector or coordinate array

        Returns:
            1-D array of length dim

        Raises:
            DimensionMismatchError: If the vector does not belong to the algebra
        """
        if isinstance(vector, AlgebraVector):
            if vector.U.shape != (self.n,) or vector.X.shape != (self.m,):
                raise DimensionMismatchError(
                    f"AlgebraVector with |U|={vector.U.size}, |X|={vector.X.size} "
                    f"does not belong to an algebra with n={self.n}, m={self.m}"
                )
            return vector.to_array()
        array = np.asarray(vector, dtype=float)
        if array.shape != (self.dim,):
            raise DimensionMismatchError(
                f"Expected coordinates of length {self.dim}, got shape {array.shape}"
            )
        return array

    def split(self, vector: VectorLike) -> AlgebraVector:
        """Structured view of a coordinate array."""
        array = self.coords(vector)
        return AlgebraVector(r=array[0], U=array[self.v_slice], X=array[self.z_slice])

    def embed_v(self, U: np.ndarray) -> np.ndarray:
        """Coordinates of a 𝔳-vector."""
        vec = np.zeros(self.dim)
        vec[self.v_slice] = U
        return vec

    def embed_z(self, X: np.ndarray) -> np.ndarray:
        """Coordinates of a 𝔷-vector."""
        vec = np.zeros(self.dim)
        vec[self.z_slice] = X
        return vec


@dataclass(frozen=True, eq=False)
class Subspace:
    """
    Subspace 𝔴⊥ of 𝔳 given by an orthonormal basis (one vector per row).

    𝔴 is implicit as the orthogonal complement of the span in 𝔳.
    """

    ambient: HTypeAlgebra
    basis: np.ndarray
    provenance: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        basis = _frozen(self.basis, ndim=2)
        object.__setattr__(self, "basis", basis)
        k, n = basis.shape
        if n != self.ambient.v_dim:
            raise DimensionMismatchError(
                f"Basis vectors have length {n}, ambient 𝔳 has dimension {self.ambient.v_dim}"
            )
        if not 1 <= k < n:
            raise SubspaceError(
                f"Codimension k={k} outside 1 <= k < n={n} (𝔴 must be a proper subspace "
                f"and 𝔴⊥ nonzero)"
            )
        gram_error = float(np.max(np.abs(basis @ basis.T - np.eye(k))))
        if gram_error > DEFAULT_TOLERANCES.identity * 10 * n:
            raise SubspaceError(f"Basis is not orthonormal (Gram error {gram_error:.2e})")

    @property
    def k(self) -> int:
        """Dimension of 𝔴⊥ (codimension of 𝔴 in 𝔳)."""
        return int(self.basis.shape[0])

    @property
    def n(self) -> int:
        """Dimension of 𝔳."""
        return int(self.basis.shape[1])

    @property
    def projector(self) -> np.ndarray:
        """Orthogonal projector of 𝔳 onto 𝔴⊥."""
        return self.basis.T @ self.basis

    def contains(self, vector: np.ndarray, tol: Optional[float] = None) -> bool:
        """Check whether a 𝔳-vector lies in 𝔴⊥ up to tolerance."""
        tol = DEFAULT_TOLERANCES.membership if tol is None else tol
        vector = np.asarray(vector, dtype=float)
        return bool(np.linalg.norm(vector - self.projector @ vector) <= tol)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {n, k, basis, provenance}."""
        return {
            "n": self.n,
            "k": self.k,
            "basis": self.basis.tolist(),
            "provenance": self.provenance,
        }

    @classmethod
    def from_vectors(
        cls,
        ambient: HTypeAlgebra,
        vectors: Any,
        provenance: Optional[Dict[str, Any]] = None,
    ) -> "Subspace":
        """
        Orthonormalize spanning vectors (Gram-Schmidt order preserved).

        Args:
            ambient: Algebra whose 𝔳 contains the vectors
            vectors: Spanning vectors, one per row
            provenance: Construction name and parameters

        Returns:
            Subspace spanned by the vectors

        Raises:
            SubspaceError: If the vectors are linearly dependent
        """
        rows = np.atleast_2d(np.asarray(vectors, dtype=float))
        q, r = np.linalg.qr(rows.T)
        diag = np.diag(r)
        if np.any(np.abs(diag) <= DEFAULT_TOLERANCES.membership):
            raise SubspaceError("Spanning vectors are linearly dependent")
        # fix signs so the first basis vector is the normalized first input
        q = q * np.sign(diag)
        return cls(ambient=ambient, basis=q.T, provenance=dict(provenance or {}))


@dataclass(frozen=True, eq=False)
class KahlerProfile:
    """Generalized Kähler angle of a unit vector with respect to 𝔴⊥."""

    angles: np.ndarray  # ascending, in [0, pi/2]
    zbasis: np.ndarray  # rows Z_1..Z_m, orthonormal
    m1: int  # first index (1-based) with angle > 0; m + 1 if none
    m2: int  # last index (1-based) with angle < pi/2; 0 if none

    def __post_init__(self) -> None:
        object.__setattr__(self, "angles", _frozen(self.angles, ndim=1))
        object.__setattr__(self, "zbasis", _frozen(self.zbasis, ndim=2))

    @property
    def m(self) -> int:
        """Number of angles."""
        return int(self.angles.size)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {angles, zbasis, m1, m2}."""
        return {
            "angles": self.angles.tolist(),
            "zbasis": self.zbasis.tolist(),
            "m1": self.m1,
            "m2": self.m2,
        }


@dataclass(frozen=True, eq=False)
class AdaptedFrame:
    """
    Orthonormal frame adapted to a unit normal ξ of S_𝔴.

    Together with B and the Z_i of the profile, the rows of xi, U, H, pbar and
    fbar form an orthonormal basis of 𝔞 ⊕ 𝔳 ⊕ 𝔷. pbar holds P̄_iξ for
    i = m1..m, fbar holds F̄_iξ for i = 1..m2; pproj and fproj hold the
    unnormalized P_iξ and F_iξ for every i.
    """

    xi: np.ndarray
    profile: KahlerProfile
    pbar: np.ndarray
    fbar: np.ndarray
    U: np.ndarray
    H: np.ndarray
    pproj: np.ndarray
    fproj: np.ndarray
    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", _frozen(self.xi, ndim=1))
        for name in ("pbar", "fbar", "U", "H", "pproj", "fproj"):
            object.__setattr__(self, name, _frozen(getattr(self, name), ndim=2))

    @property
    def m(self) -> int:
        """Dimension of 𝔷."""
        return self.profile.m

    @property
    def n(self) -> int:
        """Dimension of 𝔳."""
        return int(self.xi.size)

    @property
    def l(self) -> int:  # noqa: E743
        """Dimension of 𝔴 ⊖ span(P̄ξ)."""
        return int(self.U.shape[0])

    @property
    def h(self) -> int:
        """Dimension of 𝔴⊥ ⊖ (Rξ ⊕ span(F̄ξ))."""
        return int(self.H.shape[0])

    @property
    def angles(self) -> np.ndarray:
        """Angle tuple of the profile."""
        return self.profile.angles

    @property
    def zbasis(self) -> np.ndarray:
        """Adapted basis Z_1..Z_m of 𝔷."""
        return self.profile.zbasis

    def pbar_of(self, i: int) -> np.ndarray:
        """P̄_iξ for 1-based i in [m1, m]."""
        return self.pbar[i - self.profile.m1]

    def fbar_of(self, i: int) -> np.ndarray:
        """F̄_iξ for 1-based i in [1, m2]."""
        return self.fbar[i - 1]

    def basis_rows(self) -> np.ndarray:
        """
        Frame as algebra coordinates, one vector per row, in the order
        ξ, B, U_1..U_l, η_1..η_h, P̄_{m1}ξ..P̄_mξ, F̄_1ξ..F̄_{m2}ξ, Z_1..Z_m.
        """
        n, m = self.n, self.m
        dim = 1 + n + m

        def v_rows(rows: np.ndarray) -> np.ndarray:
            out = np.zeros((rows.shape[0], dim))
            out[:, 1:1 + n] = rows
            return out

        b = np.zeros((1, dim))
        b[0, 0] = 1.0
        z = np.zeros((m, dim))
        z[:, 1 + n:] = self.zbasis
        return np.vstack([
            v_rows(self.xi[None, :]),
            b,
            v_rows(self.U),
            v_rows(self.H),
            v_rows(self.pbar),
            v_rows(self.fbar),
            z,
        ])

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the frame vectors in the order of basis_rows()."""
        return {
            "xi": self.xi.tolist(),
            "profile": self.profile.to_dict(),
            "U": self.U.tolist(),
            "eta": self.H.tolist(),
            "Pbar": self.pbar.tolist(),
            "Fbar": self.fbar.tolist(),
            "l": self.l,
            "h": self.h,
        }
