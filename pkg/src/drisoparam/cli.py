"""
Command-line interface.

    drisoparam angles   --config RUN.yaml [--seed N] [--out DIR] [--format json|csv]
    drisoparam spectrum --config RUN.yaml [--seed N] [--workers N]
    drisoparam verify   [--config RUN.yaml] [--generators FILE.json] [--seed N]

Exit codes: 0 success, 1 failed verification, 2 invalid configuration,
3 infeasible construction, 4 internal failure (including a broken
angle/spectrum biconditional).
"""

import argparse
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

from tqdm import tqdm

from drisoparam import __version__
from drisoparam.core.config import Config, Tolerances
from drisoparam.core.exceptions import (
    CliffordRelationError,
    ConfigError,
    DRIsoparamError,
    InfeasibleConstructionError,
)
from drisoparam.core.reports import ReportWriter, angle_rows, check_rows, spectrum_rows
from drisoparam.core.run_config import (
    RunConfig,
    build_algebra,
    build_subspace,
    describe,
    load_generators,
    load_run_config,
)
from drisoparam.core.verify import run_verification
from drisoparam.geometry.damek_ricci import build_damek_ricci
from drisoparam.geometry.kahler_angle import ConstantAngleReport, constant_angle_report
from drisoparam.geometry.models import HTypeAlgebra, Subspace
from drisoparam.geometry.tube import TubeDimensions, tube_spectrum_scan
from drisoparam.utils.sampling import sphere_sampler

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the angles, spectrum and verify subcommands."""
    parser = argparse.ArgumentParser(
        prog="drisoparam",
        description="Kähler angles and tube spectra in Damek-Ricci spaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--log-level",
        choices=("DEBUG", "INFO", "WARNING", "ERROR"),
        default=None,
        help="Override DRISO_LOG_LEVEL",
    )
    parser.add_argument("--no-progress", action="store_true", help="Hide progress bars")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, config_required: bool) -> None:
        p.add_argument("--config", type=Path, required=config_required, help="YAML run file")
        p.add_argument("--seed", type=int, default=None, help="Seed of the sampled unit normals")
        p.add_argument("--out", type=Path, default=None, help="Report directory")
        p.add_argument("--format", choices=("json", "csv"), default=None, help="Report format")
        p.add_argument("--tol-angle", type=float, default=None, help="Angle classification tol")
        p.add_argument("--tol-spec", type=float, default=None, help="Spectrum constancy tolerance")
        p.add_argument("--tol-const", type=float, default=None, help="Angle constancy tolerance")
        p.add_argument("--samples", type=int, default=None, help="Number of sampled unit normals")

    angles = sub.add_parser("angles", help="Constant generalized Kähler angle report")
    common(angles, config_required=True)
    angles.set_defaults(handler=cmd_angles)

    spectrum = sub.add_parser("spectrum", help="Principal curvatures of tubes over the r-grid")
    common(spectrum, config_required=True)
    spectrum.add_argument("--workers", type=int, default=None, help="Worker threads per scan")
    spectrum.set_defaults(handler=cmd_spectrum)

    verify = sub.add_parser("verify", help="Run the verification battery")
    common(verify, config_required=False)
    verify.add_argument("--generators", type=Path, default=None, help="Clifford generators JSON")
    verify.add_argument("--ode-step", type=float, default=None, help="Jacobi integration step")
    verify.set_defaults(handler=cmd_verify)
    return parser


def _tolerances(
    args: argparse.Namespace, settings: Config, run: Optional[RunConfig]
) -> Tolerances:
    tol = settings.tolerances()
    if run is not None:
        tol = run.tolerances.apply(tol)
    return tol.override(angle=args.tol_angle, spectrum=args.tol_spec, constant=args.tol_const)


def _seed(args: argparse.Namespace, run: RunConfig) -> int:
    seed = args.seed if args.seed is not None else run.seed
    if seed is None:
        raise ConfigError("A seed is required for sampled runs (--seed or 'seed' in the run file)")
    return seed


def _first(*values: Any) -> Any:
    return next(value for value in values if value is not None)


def _samples(args: argparse.Namespace, default: int) -> int:
    samples = _first(args.samples, default)
    if samples < 1:
        raise ConfigError(f"Sample count must be positive, got {samples}")
    return samples


def _radii(values: Sequence[float]) -> Tuple[float, ...]:
    bad = [r for r in values if not r > 0]
    if not values or bad:
        raise ConfigError(f"Tube radii must be positive and non-empty, got {list(values)}")
    return tuple(float(r) for r in values)


def _writer(
    args: argparse.Namespace,
    settings: Config,
    run: Optional[RunConfig],
    seed: int,
    effective: Dict[str, Any],
) -> ReportWriter:
    out = args.out or (run.output.dir if run and run.output.dir else None) or settings.output_dir
    fmt = args.format or (run.output.format if run else "json")
    return ReportWriter(out, __version__, seed, effective, fmt)


def _effective(run: Optional[RunConfig], tol: Tolerances, **extra: Any) -> Dict[str, Any]:
    """Configuration hashed into the report header."""
    return {
        "run": run.hashable() if run else None,
        "tolerances": asdict(tol),
        **extra,
    }


def _load(
    args: argparse.Namespace, settings: Config
) -> Tuple[RunConfig, Tolerances, HTypeAlgebra, Subspace]:
    run = load_run_config(args.config)
    if run.subspace is None:
        raise ConfigError("Run file needs a 'subspace' section for this command")
    tol = _tolerances(args, settings, run)
    alg = build_algebra(run.algebra, tol.identity)
    wperp = build_subspace(run.subspace, alg)
    logger.info(f"Run: {describe(run)}; k={wperp.k}, n={wperp.n}, m={alg.z_dim}")
    return run, tol, alg, wperp


def _algebra_summary(alg: HTypeAlgebra, wperp: Subspace) -> Dict[str, Any]:
    return {"name": alg.name, "n": alg.v_dim, "m": alg.z_dim, "k": wperp.k}


def angle_payload(
    report: ConstantAngleReport, alg: HTypeAlgebra, wperp: Subspace
) -> Dict[str, Any]:
    """Angle report body: reference tuple, verdict and one entry per sample."""
    return {
        "algebra": _algebra_summary(alg, wperp),
        "subspace": wperp.to_dict(),
        "angles": report.reference_angles.tolist(),
        "constant": report.constant,
        "max_deviation": report.max_deviation,
        "witness": list(report.witness),
        "samples": [
            {"xi": xi.tolist(), **profile.to_dict()}
            for xi, profile in zip(report.samples, report.profiles)
        ],
    }


def cmd_angles(args: argparse.Namespace, settings: Config) -> int:
    """Write the constant-angle report; exit 0 whatever the verdict."""
    run, tol, alg, wperp = _load(args, settings)
    seed = _seed(args, run)
    samples = _samples(args, _first(run.samples, settings.samples))
    sampler = sphere_sampler(wperp, samples, seed, include_basis=True)
    vectors = tqdm(list(sampler), desc="angles", disable=args.no_progress, file=sys.stderr)
    report = constant_angle_report(alg, wperp, vectors, tol.constant, tol.angle)

    payload = angle_payload(report, alg, wperp)
    writer = _writer(args, settings, run, seed, _effective(run, tol, samples=samples))
    path = writer.write("angles", "angles", payload, angle_rows(payload))
    verdict = "constant" if report.constant else "not constant"
    print(f"Kähler angle {verdict} (max deviation {report.max_deviation:.3e}): {path}")
    return EXIT_OK


def cmd_spectrum(args: argparse.Namespace, settings: Config) -> int:
    """Scan tube spectra over the r-grid; exit 4 if the biconditional fails."""
    run, tol, alg, wperp = _load(args, settings)
    seed = _seed(args, run)
    samples = _samples(args, _first(run.samples, settings.samples))
    workers = _first(args.workers, run.workers, settings.workers)
    r_grid = _radii(_first(run.r_grid, settings.r_grid))
    dr = build_damek_ricci(alg)
    sampler = sphere_sampler(wperp, samples, seed, include_basis=True)

    scans = []
    for r in r_grid:
        bar = tqdm(total=len(sampler), desc=f"r={r:g}", disable=args.no_progress, file=sys.stderr)
        with bar:
            scans.append(tube_spectrum_scan(
                dr, wperp, r, sampler, tol, workers,
                progress_callback=lambda done, total, label: bar.update(1),
            ))

    dims = TubeDimensions.from_subspace(wperp)
    serialized = [scan.to_dict() for scan in scans]
    payload = {
        "algebra": _algebra_summary(alg, wperp),
        "subspace": wperp.to_dict(),
        "dimensions": {"k": dims.k, "dim_s": dims.dim_s, "m": dims.m},
        "constant": all(scan.constant for scan in scans),
        "angles_constant": all(scan.angles_constant for scan in scans),
        "biconditional_holds": all(scan.biconditional_holds for scan in scans),
        "max_trace_residual": max(scan.trace_residual for scan in scans),
        "scans": serialized,
    }
    effective = _effective(run, tol, samples=samples, r_grid=list(r_grid))
    writer = _writer(args, settings, run, seed, effective)
    path = writer.write("spectrum", "spectrum", payload, spectrum_rows(serialized))

    for scan in scans:
        print(
            f"r={scan.r:g}: {'constant' if scan.constant else 'non-constant'} principal curvatures "
            f"(spread {scan.spread:.3e}), mean curvature {scan.mean_curvature:.9f}"
        )
    print(f"Report: {path}")
    if not payload["biconditional_holds"]:
        logger.error("Principal-curvature and Kähler-angle constancy disagree")
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, settings: Config) -> int:
    """Run the verification battery; exit 1 naming the first failing check."""
    run = load_run_config(args.config) if args.config else None
    tol = _tolerances(args, settings, run)
    seed = args.seed if args.seed is not None else (
        run.seed if run and run.seed is not None else settings.seed
    )
    samples = _samples(args, _first(run.samples if run else None, settings.samples))
    r_grid = _radii(_first(run.r_grid if run else None, settings.r_grid))
    ode_step = args.ode_step if args.ode_step is not None else settings.ode_step
    if not ode_step > 0:
        raise ConfigError(f"Jacobi integration step must be positive, got {ode_step}")

    algebra: Optional[HTypeAlgebra] = None
    if args.generators:
        algebra = load_generators(args.generators, validate=False)
    elif run is not None:
        algebra = build_algebra(run.algebra, tol.identity)

    with tqdm(total=5, desc="verify", disable=args.no_progress, file=sys.stderr) as bar:
        report = run_verification(
            tol, seed, samples, r_grid, algebra, ode_step, settings.ode_t_max,
            progress_callback=lambda done, total, label: bar.update(1),
        )

    payload = report.to_dict()
    effective = _effective(
        run, tol, samples=samples, r_grid=list(r_grid), ode_step=ode_step,
        ode_t_max=settings.ode_t_max,
        generators=str(args.generators) if args.generators else None,
    )
    writer = _writer(args, settings, run, seed, effective)
    path = writer.write("verify", "verify", payload, check_rows(payload))
    for line in report.summary_lines():
        print(line)
    print(f"Report: {path}")
    if not report.passed:
        failure = report.first_failure
        detail = failure.detail or f"residual {failure.residual:.3e}"
        logger.error(f"Verification failed at {failure.name}: {detail}")
        print(f"FAILED: {failure.name}: {detail}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, settings: Optional[Config] = None) -> int:
    """
    Parse arguments and dispatch to a subcommand.

    Args:
        argv: Arguments without the program name (sys.argv[1:] if None)
        settings: Process configuration (read from the environment if None)

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help/--version
        return int(e.code or 0)
    settings = settings or Config()
    if args.log_level:
        package_logger = logging.getLogger("drisoparam")
        package_logger.setLevel(args.log_level)
        for handler in package_logger.handlers:
            handler.setLevel(args.log_level)

    try:
        return args.handler(args, settings)
    except (ConfigError, CliffordRelationError) as e:
        logger.error(f"Configuration error: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleConstructionError as e:
        logger.error(f"Infeasible construction: {e}")
        print(f"ERROR: infeasible construction: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DRIsoparamError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return EXIT_INTERNAL

