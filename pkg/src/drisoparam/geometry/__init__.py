"""Geometry of Damek-Ricci spaces and tubes around the submanifolds S_𝔴."""

from drisoparam.geometry.clifford import (
    build_clifford_generators,
    build_htype_algebra,
    j_apply,
    v_bracket,
)
from drisoparam.geometry.constructions import (
    cayley_subspace,
    direct_sum,
    gram_basis_r3,
    kahler_angle_plane,
    mixed_complex_subspace,
    quaternionic_model,
    quaternionic_subspace,
)
from drisoparam.geometry.damek_ricci import (
    build_damek_ricci,
    curvature,
    dr_bracket,
    geodesic_velocity,
    levi_civita,
)
from drisoparam.geometry.focal import adapted_frame, focal_shape_operator, focal_spectrum
from drisoparam.geometry.kahler_angle import (
    angle_form,
    constant_angle_report,
    generalized_kahler_angle,
    kahler_companion,
)
from drisoparam.geometry.models import (
    AdaptedFrame,
    AlgebraVector,
    CliffordGenerators,
    DamekRicciAlgebra,
    HTypeAlgebra,
    KahlerProfile,
    Subspace,
)
from drisoparam.geometry.tube import (
    characteristic_polynomial,
    fundamental_operators,
    mean_curvature,
    tube_spectrum_scan,
)

__all__ = [
    "AdaptedFrame",
    "AlgebraVector",
    "CliffordGenerators",
    "DamekRicciAlgebra",
    "HTypeAlgebra",
    "KahlerProfile",
    "Subspace",
    "adapted_frame",
    "angle_form",
    "build_clifford_generators",
    "build_damek_ricci",
    "build_htype_algebra",
    "cayley_subspace",
    "characteristic_polynomial",
    "constant_angle_report",
    "curvature",
    "direct_sum",
    "dr_bracket",
    "focal_shape_operator",
    "focal_spectrum",
    "fundamental_operators",
    "generalized_kahler_angle",
    "geodesic_velocity",
    "gram_basis_r3",
    "j_apply",
    "kahler_angle_plane",
    "kahler_companion",
    "levi_civita",
    "mean_curvature",
    "mixed_complex_subspace",
    "quaternionic_model",
    "quaternionic_subspace",
    "tube_spectrum_scan",
    "v_bracket",
]
