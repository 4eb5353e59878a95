"""
Verification Battery.

Runs the identities of every geometry module on the preset algebras and the
explicit constructions, and collects one named result per check. The
battery is deterministic for a given seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from drisoparam.core.config import DEFAULT_TOLERANCES, Tolerances
from drisoparam.core.exceptions import DRIsoparamError, InfeasibleConstructionError
from drisoparam.geometry.clifford import (
    build_htype_algebra,
    htype_identity_residuals,
    j_matrix,
    validate_algebra,
)
from drisoparam.geometry.constructions import (
    cayley_subspace,
    direct_sum,
    fbar_structure_check,
    gram_basis_r3,
    kahler_angle_plane,
    mixed_complex_subspace,
    quaternionic_model,
    quaternionic_subspace,
)
from drisoparam.geometry.damek_ricci import (
    build_damek_ricci,
    connection_residuals,
    curvature_identity_residuals,
    curvature_residuals,
    geodesic_residual,
)
from drisoparam.geometry.focal import adapted_frame, focal_shape_operator, focal_spectrum
from drisoparam.geometry.jacobi import (
    closed_jacobi_field,
    closed_vs_numeric,
    initial_condition_residual,
    jacobi_residual,
    sample_times,
)
from drisoparam.geometry.kahler_angle import (
    adapted_projections,
    angle_form,
    constant_angle_report,
    generalized_kahler_angle,
    kahler_angle_wrt,
    kahler_companion,
)
from drisoparam.geometry.models import AdaptedFrame, DamekRicciAlgebra, HTypeAlgebra, Subspace
from drisoparam.geometry.tube import (
    TubeDimensions,
    characteristic_polynomial,
    det_c_closed,
    domain_tags,
    fundamental_operators,
    jacobi_operators,
    mean_curvature,
    numeric_characteristic_polynomial,
    tube_spectrum_scan,
)
from drisoparam.utils.sampling import random_unit_vector, sphere_sampler

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int, str], None]

HTYPE_CENTERS = (1, 2, 3, 5, 6, 7)
JACOBI_TOL = 1e-6
JACOBI_RESIDUAL_TOL = 1e-7
GEODESIC_TOL = 1e-7
DET_TOL = 1e-9
OPERATOR_TOL = 1e-9
POLY_TOL = 1e-8
NONCONSTANT_SPREAD = 1e-3
DET_RADII = (0.1, 0.5, 1.0, 2.0, 5.0)
QUATERNIONIC_ANGLES = (
    (np.pi / 3, np.pi / 3, np.pi / 3),
    (np.pi / 4, np.pi / 3, 5 * np.pi / 12),
    (np.pi / 3, 2 * np.pi / 5, np.pi / 2),
)


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    residual: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """Serialize the check."""
        return {
            "name": self.name,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


def check(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    """Check passing when residual <= tolerance."""
    residual = float(residual)
    return CheckResult(name, residual, tolerance, bool(residual <= tolerance), detail)


def flag(name: str, condition: bool, detail: str = "") -> CheckResult:
    """Check of a boolean condition."""
    return CheckResult(name, 0.0 if condition else 1.0, 0.0, bool(condition), detail)


@dataclass
class VerificationReport:
    """All checks of a verification run."""

    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """True when every check passed."""
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        """First failing check, if any."""
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> Dict[str, Any]:
        """Serialize as {passed, counts, checks}."""
        failed = sum(1 for c in self.checks if not c.passed)
        return {
            "passed": self.passed,
            "total": len(self.checks),
            "failed": failed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def summary_lines(self) -> List[str]:
        """Human-readable summary, failures first."""
        failed = [c for c in self.checks if not c.passed]
        lines = [f"{len(self.checks) - len(failed)}/{len(self.checks)} checks passed"]
        for c in failed:
            line = f"FAILED {c.name}: residual {c.residual:.3e} > {c.tolerance:.1e} {c.detail}"
            lines.append(line.rstrip())
        return lines


@dataclass
class _Case:
    """A subspace with a fixed unit normal used by the frame-based checks."""

    label: str
    dr: DamekRicciAlgebra
    wperp: Subspace
    xi: np.ndarray


def _residual_checks(
    prefix: str, residuals: Dict[str, float], tolerance: float
) -> List[CheckResult]:
    return [check(f"{prefix}.{key}", value, tolerance) for key, value in residuals.items()]


def _generic_vector(wperp: Subspace, weights: Sequence[float]) -> np.ndarray:
    coeffs = np.zeros(wperp.k)
    coeffs[: len(weights)] = weights[: wperp.k]
    vec = coeffs @ wperp.basis
    return vec / np.linalg.norm(vec)


def _cases() -> List[_Case]:
    """Subspaces covering interior, zero and right angles."""
    quaternionic = quaternionic_model(5)
    cayley = build_htype_algebra(7, 1, name="cayley-plane")
    complex_alg = build_htype_algebra(1, 3, name="complex-hyperbolic-n4")
    heisenberg = build_htype_algebra(2, 2, name="heisenberg-type")
    cases = []

    wperp = quaternionic_subspace(quaternionic, np.pi / 3, 2 * np.pi / 5, np.pi / 2)
    cases.append(_Case(
        "quaternionic", build_damek_ricci(quaternionic.algebra), wperp,
        _generic_vector(wperp, (0.6, 0.3, -0.5, 0.55)),
    ))
    wperp = cayley_subspace(cayley, 5, np.eye(8)[0])
    cases.append(_Case(
        "cayley-k5", build_damek_ricci(cayley), wperp,
        _generic_vector(wperp, (0.4, 0.7, 0.1, -0.3, 0.5)),
    ))
    wperp = mixed_complex_subspace(complex_alg)
    cases.append(_Case(
        "mixed-complex", build_damek_ricci(complex_alg), wperp,
        _generic_vector(wperp, (1.0, 0.5, 0.7)),
    ))
    # three generic directions in a module of dimension 8 over a 2-dimensional center
    wperp = Subspace.from_vectors(
        heisenberg,
        [
            [1, 0, 0, 0, 0.3, 0, 0, 0],
            [0, 0.2, 1, 0, 0, 0, 0.5, 0],
            [0, 0, 0, 0.4, 0, 1, 0, 0.2],
        ],
        provenance={"construction": "explicit", "params": {}},
    )
    cases.append(_Case(
        "heisenberg-type", build_damek_ricci(heisenberg), wperp,
        _generic_vector(wperp, (0.5, -0.8, 0.3)),
    ))
    return cases


def _htype_checks(
    rng: np.random.Generator, tol: Tolerances, algebra: Optional[HTypeAlgebra]
) -> List[CheckResult]:
    results = []
    algebras = [build_htype_algebra(m) for m in HTYPE_CENTERS]
    if algebra is not None:
        try:
            validate_algebra(algebra, tol.identity)
        except DRIsoparamError as e:
            return [flag(f"htype.{algebra.name}.relations", False, str(e))]
        algebras.append(algebra)
    for alg in algebras:
        residuals = htype_identity_residuals(alg, rng, draws=100)
        results.extend(_residual_checks(f"htype.{alg.name}", residuals, tol.sampled))
    return results


def _relations_hold(algebra: HTypeAlgebra, tol: Tolerances) -> bool:
    try:
        validate_algebra(algebra, tol.identity)
    except DRIsoparamError:
        return False
    return True


def _connection_checks(
    rng: np.random.Generator, tol: Tolerances, algebra: Optional[HTypeAlgebra]
) -> List[CheckResult]:
    algebras = [
        build_htype_algebra(1, 3, name="complex-hyperbolic-n4"),
        quaternionic_model(3).algebra,
        build_htype_algebra(7, 1, name="cayley-plane"),
        build_htype_algebra(2, 1, name="heisenberg-type"),
    ]
    if algebra is not None and _relations_hold(algebra, tol):
        algebras.append(algebra)
    results = []
    for alg in algebras:
        dr = build_damek_ricci(alg)
        results.extend(_residual_checks(
            f"connection.{alg.name}", connection_residuals(dr, rng, 32), tol.sampled
        ))
        results.extend(_residual_checks(
            f"curvature.{alg.name}", curvature_residuals(dr, rng, 32), tol.sampled
        ))
        results.extend(_residual_checks(
            f"curvature.{alg.name}.formula", curvature_identity_residuals(dr, rng, 100), tol.sampled
        ))
    dr = build_damek_ricci(build_htype_algebra(7, 1, name="cayley-plane"))
    times = np.linspace(0.0, 5.0, 26)
    worst = max(geodesic_residual(dr, random_unit_vector(rng, dr.n), times) for _ in range(20))
    results.append(check("geodesic.cayley-plane", worst, GEODESIC_TOL))
    return results


def _kahler_checks(
    rng: np.random.Generator, tol: Tolerances, cases: Iterable[_Case]
) -> List[CheckResult]:
    results = []
    for case in cases:
        alg = case.dr.htype
        profile = generalized_kahler_angle(alg, case.wperp, case.xi, tol.angle)
        form = angle_form(alg, case.wperp, case.xi)
        reconstructed = profile.zbasis.T @ np.diag(np.cos(profile.angles) ** 2) @ profile.zbasis
        results.append(check(
            f"kahler.{case.label}.reconstruction", np.max(np.abs(form - reconstructed)), tol.sampled
        ))
        p, f = adapted_projections(alg, case.wperp, case.xi, profile.zbasis)
        off = ~np.eye(profile.m, dtype=bool)
        for name, rows in (("F", f), ("P", p)):
            worst = np.max(np.abs((rows @ rows.T)[off]), initial=0.0)
            results.append(check(f"kahler.{case.label}.orthogonality_{name}", worst, tol.sampled))
        low, high = profile.angles[0], profile.angles[-1]
        outside = 0.0
        for _ in range(200):
            phi = kahler_angle_wrt(alg, case.wperp, case.xi, random_unit_vector(rng, alg.z_dim))
            outside = max(outside, low - phi, phi - high)
        results.append(check(f"kahler.{case.label}.extremality", outside, tol.constant))
        flipped = generalized_kahler_angle(alg, case.wperp, -case.xi, tol.angle)
        sign_error = np.max(np.abs(flipped.angles - profile.angles))
        results.append(check(f"kahler.{case.label}.sign", sign_error, tol.sampled))
        rotated = generalized_kahler_angle(alg, case.wperp, case.xi, tol.angle, rng=rng)
        rebuilt = rotated.zbasis.T @ np.diag(np.cos(rotated.angles) ** 2) @ rotated.zbasis
        rebuild_error = np.max(np.abs(rebuilt - form))
        results.append(check(f"kahler.{case.label}.eigenbasis", rebuild_error, tol.sampled))
    return results


def _frame_checks(
    tol: Tolerances, cases: Iterable[_Case], ode_step: float, t_max: float
) -> List[CheckResult]:
    results = []
    for case in cases:
        frame = adapted_frame(case.dr.htype, case.wperp, case.xi)
        results.extend(_focal_checks(case, frame, tol))
        results.extend(_jacobi_checks(case, frame, ode_step, t_max))
        results.extend(_tube_checks(case, frame, tol))
    return results


def _focal_checks(case: _Case, frame: AdaptedFrame, tol: Tolerances) -> List[CheckResult]:
    operator = focal_shape_operator(case.dr, case.wperp, case.xi, tol.sampled, frame=frame)
    spectrum = focal_spectrum(case.dr, case.wperp, case.xi, tol.sampled)
    asymmetry = np.max(np.abs(operator.matrix - operator.matrix.T))
    return [
        check(f"focal.{case.label}.closed_form", operator.residual, tol.sampled),
        check(f"focal.{case.label}.symmetry", asymmetry, 100 * tol.identity),
        check(f"focal.{case.label}.spectrum", spectrum.residual, tol.sampled),
        check(f"focal.{case.label}.trace", abs(np.sum(spectrum.eigenvalues)), tol.sampled),
    ]


def _jacobi_checks(
    case: _Case, frame: AdaptedFrame, ode_step: float, t_max: float
) -> List[CheckResult]:
    tags = domain_tags(frame)
    fields = [closed_jacobi_field(case.dr, frame, tag) for tag in tags]
    times = sample_times(50, t_max)
    residual = max(jacobi_residual(case.dr, f, t) for f in fields for t in times)
    initial = max(initial_condition_residual(case.dr, case.wperp, f) for f in fields)
    numeric = closed_vs_numeric(case.dr, case.wperp, frame, tags, t_max, ode_step)
    return [
        check(f"jacobi.{case.label}.equation", residual, JACOBI_RESIDUAL_TOL),
        check(f"jacobi.{case.label}.initial_conditions", initial, DEFAULT_TOLERANCES.sampled),
        check(f"jacobi.{case.label}.closed_vs_numeric", numeric, JACOBI_TOL, f"step {ode_step}"),
    ]


def _tube_checks(case: _Case, frame: AdaptedFrame, tol: Tolerances) -> List[CheckResult]:
    dims = TubeDimensions.from_subspace(case.wperp)
    det_error = operator_error = trace_error = poly_error = root_error = 0.0
    for r in DET_RADII:
        blocks = fundamental_operators(r, frame, tol)
        assembled = jacobi_operators(case.dr, frame, r, tol)
        expected_det = det_c_closed(r, frame)
        det_error = max(det_error, abs(assembled.det_C - expected_det) / expected_det)
        scale = max(1.0, float(np.max(np.abs(blocks.S))))
        operator_error = max(operator_error, float(np.max(np.abs(assembled.S - blocks.S))) / scale)
        trace_error = max(trace_error, abs(assembled.trace - mean_curvature(r, dims)) / scale)
        poly = characteristic_polynomial(r, frame.profile, dims)
        numeric = numeric_characteristic_polynomial(assembled.S).coef
        numeric = numeric / numeric[-1]
        closed = poly.normalized_coefficients()
        coef_scale = max(1.0, float(np.max(np.abs(numeric))))
        poly_error = max(poly_error, float(np.max(np.abs(closed - numeric))) / coef_scale)
        roots = poly.roots() - assembled.eigenvalues()
        root_error = max(root_error, float(np.max(np.abs(roots))) / scale)
    return [
        check(f"tube.{case.label}.det_C", det_error, DET_TOL),
        check(f"tube.{case.label}.shape_operator", operator_error, OPERATOR_TOL),
        check(f"tube.{case.label}.mean_curvature", trace_error, OPERATOR_TOL),
        check(f"tube.{case.label}.characteristic_polynomial", poly_error, POLY_TOL),
        check(f"tube.{case.label}.principal_curvatures", root_error, POLY_TOL),
    ]


def _expect_infeasible(name: str, build: Callable[[], Any]) -> CheckResult:
    try:
        build()
    except InfeasibleConstructionError as e:
        return flag(name, True, str(e))
    return flag(name, False, "construction unexpectedly succeeded")


def _construction_checks(
    rng: np.random.Generator, tol: Tolerances, samples: int, seed: int
) -> List[CheckResult]:
    results = []
    rows = gram_basis_r3(0.5, 0.5, 0.5)
    target = np.array([[1.0, 0.5, 0.5], [0.5, 1.0, 0.5], [0.5, 0.5, 1.0]])
    results.append(check("gram.feasible", np.max(np.abs(rows @ rows.T - target)), tol.identity))
    results.append(_expect_infeasible("gram.infeasible", lambda: gram_basis_r3(1.0, 0.0, 0.0)))

    model = quaternionic_model(5)
    results.append(_expect_infeasible(
        "quaternionic.infeasible(pi/6,pi/6,pi/2)",
        lambda: quaternionic_subspace(model, np.pi / 6, np.pi / 6, np.pi / 2),
    ))
    results.append(_expect_infeasible(
        "quaternionic.infeasible(pi/4,pi/3,pi/2)",
        lambda: quaternionic_subspace(model, np.pi / 4, np.pi / 3, np.pi / 2),
    ))
    for phis in QUATERNIONIC_ANGLES:
        label = "quaternionic(" + ",".join(f"{p:.4f}" for p in phis) + ")"
        wperp = quaternionic_subspace(model, *phis)
        target = np.diag(np.cos(phis) ** 2)
        worst = 0.0
        for _ in range(100):
            xi = random_unit_vector(rng, 4) @ wperp.basis
            form = angle_form(model.algebra, wperp, xi)
            worst = max(worst, float(np.max(np.abs(form - target))))
        results.append(check(f"{label}.angle_form", worst, tol.sampled))
        gram = wperp.basis @ wperp.basis.T
        results.append(check(f"{label}.orthonormal", np.max(np.abs(gram - np.eye(4))), tol.sampled))
        structure = fbar_structure_check(model, wperp, rng)
        if structure.skipped:
            results.append(flag(f"{label}.fbar_structure", True, f"skipped: {structure.note}"))
        else:
            results.extend(_residual_checks(f"{label}.fbar", structure.residuals, tol.sampled))

    cayley = build_htype_algebra(7, 1, name="cayley-plane")
    for k, zeros in ((4, 3), (5, 4)):
        xi = random_unit_vector(rng, 8)
        wperp = cayley_subspace(cayley, k, xi)
        sampler = sphere_sampler(wperp, samples, seed)
        report = constant_angle_report(cayley, wperp, sampler, tol.constant, tol.angle)
        expected = np.array([0.0] * zeros + [np.pi / 2] * (7 - zeros))
        detail = f"deviation {report.max_deviation:.2e}"
        results.append(flag(f"cayley-k{k}.constant", report.constant, detail))
        angle_error = np.max(np.abs(report.angles - expected))
        results.append(check(f"cayley-k{k}.angles", angle_error, tol.angle))

    big = quaternionic_model(9)
    third = np.pi / 3
    summed = direct_sum([quaternionic_subspace(big, third, third, third, block=b) for b in (0, 1)])
    sampler = sphere_sampler(summed, samples, seed)
    report = constant_angle_report(big.algebra, summed, sampler, tol.constant, tol.angle)
    detail = f"deviation {report.max_deviation:.2e}"
    results.append(flag("direct-sum.constant", report.constant, detail))

    complex_alg = build_htype_algebra(1, 3, name="complex-hyperbolic-n4")
    theta = np.pi / 5
    plane = kahler_angle_plane(complex_alg, theta)
    e = plane.basis[0]
    J = j_matrix(complex_alg, np.ones(1))
    # second basis vector is cos θ Je + sin θ Jf
    f = -J @ ((plane.basis[1] - np.cos(theta) * J @ e) / np.sin(theta))
    eta = kahler_companion(plane, e, tol.angle)
    distance = min(np.linalg.norm(eta - f), np.linalg.norm(eta + f))
    results.append(check("kahler-angle-plane.companion", distance, tol.sampled))
    profile = generalized_kahler_angle(complex_alg, plane, e, tol.angle)
    results.append(check("kahler-angle-plane.angle", abs(profile.angles[0] - theta), tol.sampled))
    return results


def _biconditional_checks(
    tol: Tolerances, samples: int, seed: int, r_grid: Sequence[float]
) -> List[CheckResult]:
    quaternionic = quaternionic_model(5)
    cayley = build_htype_algebra(7, 1, name="cayley-plane")
    complex_alg = build_htype_algebra(1, 3, name="complex-hyperbolic-n4")
    third = np.pi / 3
    subspaces: List[Tuple[str, HTypeAlgebra, Subspace, bool]] = [
        (
            "quaternionic(pi/3,pi/3,pi/3)", quaternionic.algebra,
            quaternionic_subspace(quaternionic, third, third, third), True,
        ),
        (
            "quaternionic(pi/3,2pi/5,pi/2)", quaternionic.algebra,
            quaternionic_subspace(quaternionic, third, 2 * np.pi / 5, np.pi / 2), True,
        ),
        ("cayley-k4", cayley, cayley_subspace(cayley, 4, np.eye(8)[0]), True),
        ("cayley-k5", cayley, cayley_subspace(cayley, 5, np.eye(8)[0]), True),
        ("mixed-complex", complex_alg, mixed_complex_subspace(complex_alg), False),
    ]
    results = []
    for label, alg, wperp, constant in subspaces:
        dr = build_damek_ricci(alg)
        sampler = sphere_sampler(wperp, samples, seed, include_basis=True)
        for r in r_grid:
            report = tube_spectrum_scan(dr, wperp, r, sampler, tol)
            name = f"biconditional.{label}.r={r:g}"
            results.append(flag(f"{name}.holds", report.biconditional_holds))
            trace_tol = OPERATOR_TOL * max(1.0, report.mean_curvature)
            results.append(check(f"{name}.mean_curvature", report.trace_residual, trace_tol))
            if constant:
                results.append(check(f"{name}.spread", report.spread, tol.spectrum))
            else:
                varies = report.spread > NONCONSTANT_SPREAD
                results.append(flag(f"{name}.varies", varies, f"spread {report.spread:.3e}"))
    return results


def run_verification(
    tolerances: Optional[Tolerances] = None,
    seed: int = 7,
    samples: int = 64,
    r_grid: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0),
    algebra: Optional[HTypeAlgebra] = None,
    ode_step: float = 1e-3,
    ode_t_max: float = 3.0,
    progress_callback: Optional[ProgressCallback] = None,
) -> VerificationReport:
    """
    Run the full battery.

    Args:
        tolerances: Tolerance set (defaults when None)
        seed: Seed of every random draw
        samples: Unit normals per sampled scan
        r_grid: Radii of the biconditional scans
        algebra: Additional algebra (e.g. from a generators file) whose
            relations, identities and curvature are checked too
        ode_step: Step of the numerical Jacobi oracle
        ode_t_max: Length of the geodesic segment the Jacobi fields are checked on
        progress_callback: Called as (done, total, section) after each section

    Returns:
        VerificationReport; a section that raises is recorded as a failed
        check carrying the error message
    """
    tol = tolerances or DEFAULT_TOLERANCES
    rng = np.random.default_rng(seed)
    report = VerificationReport(seed=seed)
    cases: List[_Case] = []

    def frame_section() -> List[CheckResult]:
        cases.extend(_cases())
        return _kahler_checks(rng, tol, cases) + _frame_checks(tol, cases, ode_step, ode_t_max)

    sections: List[Tuple[str, Callable[[], List[CheckResult]]]] = [
        ("htype", lambda: _htype_checks(rng, tol, algebra)),
        ("connection", lambda: _connection_checks(rng, tol, algebra)),
        ("frames", frame_section),
        ("constructions", lambda: _construction_checks(rng, tol, samples, seed)),
        ("biconditional", lambda: _biconditional_checks(tol, samples, seed, r_grid)),
    ]
    for done, (label, section) in enumerate(sections, start=1):
        logger.info(f"Verifying {label}")
        try:
            results = section()
        except DRIsoparamError as e:
            logger.warning(f"Section {label} raised: {e}")
            results = [flag(f"{label}.error", False, str(e))]
        report.checks.extend(results)
        failed = [c.name for c in results if not c.passed]
        if failed:
            logger.warning(f"{label}: {len(failed)} failing check(s), first {failed[0]}")
        if progress_callback:
            progress_callback(done, len(sections), label)
    logger.info(report.summary_lines()[0])
    return report
