"""
Configuration Management.

Handles process-wide settings from environment variables and .env files.
Run-specific settings (algebra, subspace, radii) live in run_config.
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv


@dataclass(frozen=True)
class Tolerances:
    """Numerical tolerances shared by the geometry modules."""

    identity: float = 1e-12  # exactly representable constructions
    sampled: float = 1e-10  # identities checked on random draws
    angle: float = 1e-9  # classification of cos^2 / sin^2 as 0
    constant: float = 1e-8  # constancy of angle tuples
    spectrum: float = 1e-8  # constancy of tube spectra
    symmetry: float = 1e-9  # asymmetry allowed in shape operators
    membership: float = 1e-9  # component of a vector outside a subspace

    def override(self, **values: Optional[float]) -> "Tolerances":
        """
        Return a copy with the given (non-None) tolerances replaced.

        Args:
            **values: Tolerance names mapped to new values

        Returns:
            New Tolerances instance
        """
        return replace(self, **{k: v for k, v in values.items() if v is not None})


DEFAULT_TOLERANCES = Tolerances()


def _parse_grid(raw: str) -> Tuple[float, ...]:
    return tuple(float(item) for item in raw.split(",") if item.strip())


class Config:
    """Application configuration."""

    def __init__(self, env_file: Optional[str] = None):
        """
        Initialize configuration.

        Args:
            env_file: Path to .env file (optional)
        """
        # Load environment variables
        if env_file:
            load_dotenv(env_file)
        else:
            load_dotenv()

        # Application metadata
        self.app_name = "drisoparam"
        self.version = "0.3.0"

        # Logging
        self.log_level = os.getenv("DRISO_LOG_LEVEL", "INFO")
        self.log_file = os.getenv("DRISO_LOG_FILE", "drisoparam.log")
        self.log_max_size = int(os.getenv("DRISO_LOG_MAX_SIZE", "10485760"))  # 10MB
        self.log_backup_count = int(os.getenv("DRISO_LOG_BACKUP_COUNT", "5"))

        # Tolerances
        self.tol_identity = float(os.getenv("DRISO_TOL_IDENTITY", "1e-12"))
        self.tol_sampled = float(os.getenv("DRISO_TOL_SAMPLED", "1e-10"))
        self.tol_angle = float(os.getenv("DRISO_TOL_ANGLE", "1e-9"))
        self.tol_constant = float(os.getenv("DRISO_TOL_CONST", "1e-8"))
        self.tol_spectrum = float(os.getenv("DRISO_TOL_SPEC", "1e-8"))
        self.tol_symmetry = float(os.getenv("DRISO_TOL_SYMMETRY", "1e-9"))

        # Jacobi field integration
        self.ode_step = float(os.getenv("DRISO_ODE_STEP", "1e-3"))
        self.ode_t_max = float(os.getenv("DRISO_ODE_T_MAX", "3.0"))

        # Scans
        self.r_grid = _parse_grid(os.getenv("DRISO_R_GRID", "0.25,0.5,1,2,4"))
        self.samples = int(os.getenv("DRISO_SAMPLES", "64"))
        self.seed = int(os.getenv("DRISO_SEED", "7"))
        self.workers = int(os.getenv("DRISO_WORKERS", "1"))

        # Development
        self.debug = os.getenv("DEBUG", "false").lower() == "true"

        # Paths
        self.output_dir = Path(os.getenv("DRISO_OUTPUT_DIR", "reports"))

    def tolerances(self) -> Tolerances:
        """
        Build the tolerance set from the configured values.

        Returns:
            Frozen Tolerances instance
        """
        return Tolerances(
            identity=self.tol_identity,
            sampled=self.tol_sampled,
            angle=self.tol_angle,
            constant=self.tol_constant,
            spectrum=self.tol_spectrum,
            symmetry=self.tol_symmetry,
        )

    def reload(self) -> None:
        """Reload configuration from environment variables."""
        load_dotenv(override=True)
        self.__init__()

    def __repr__(self) -> str:
        """String representation."""
        return (
            f"Config(app_name='{self.app_name}', "
            f"version='{self.version}', "
            f"seed={self.seed}, "
            f"workers={self.workers}, "
            f"debug={self.debug})"
        )
