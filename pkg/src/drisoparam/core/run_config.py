"""
Run Configuration.

A run file is YAML validated with pydantic models. It names an algebra
(preset or Clifford data), a subspace (explicit basis or construction),
the radii and sample count of the scans, the seed, tolerance overrides and
where reports go.

Example:
    algebra: {preset: cayley-plane}
    subspace: {construction: cayley, params: {k: 5}}
    r_grid: [0.5, 1, 2]
    samples: 64
    seed: 7
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import numpy as np
import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationError,
    field_validator,
    model_validator,
)

from drisoparam.core.config import Tolerances
from drisoparam.core.exceptions import (
    ConfigError,
    DimensionMismatchError,
    SubspaceError,
)
from drisoparam.geometry.clifford import build_htype_algebra, validate_algebra
from drisoparam.geometry.constructions import (
    QuaternionicModel,
    cayley_subspace,
    direct_sum,
    kahler_angle_plane,
    mixed_complex_subspace,
    quaternionic_model,
    quaternionic_subspace,
)
from drisoparam.geometry.models import CliffordGenerators, HTypeAlgebra, Subspace

logger = logging.getLogger(__name__)

PRESETS = ("complex-hyperbolic", "quaternionic-hyperbolic", "cayley-plane", "heisenberg-type")
CONSTRUCTIONS = (
    "explicit",
    "quaternionic",
    "cayley",
    "mixed-complex",
    "kahler-angle-plane",
    "direct-sum",
)


class AlgebraSpec(BaseModel):
    """Either {preset, n} or {m, copies} or {generators_file}."""

    model_config = ConfigDict(extra="forbid")

    preset: Optional[Literal[
        "complex-hyperbolic", "quaternionic-hyperbolic", "cayley-plane", "heisenberg-type"
    ]] = None
    n: Optional[int] = Field(default=None, ge=2)
    m: Optional[int] = Field(default=None, ge=1, le=16)
    copies: int = Field(default=1, ge=1)
    generators_file: Optional[Path] = None

    @model_validator(mode="after")
    def _one_source(self) -> "AlgebraSpec":
        sources = [self.preset is not None, self.m is not None, self.generators_file is not None]
        if sum(sources) != 1:
            raise ValueError("algebra needs exactly one of 'preset', 'm' or 'generators_file'")
        if self.preset in ("complex-hyperbolic", "quaternionic-hyperbolic") and self.n is None:
            raise ValueError(f"preset '{self.preset}' needs 'n'")
        return self


class SubspaceSpec(BaseModel):
    """Either {basis} or {construction, params} or {construction: direct-sum, parts}."""

    model_config = ConfigDict(extra="forbid")

    construction: Literal[
        "explicit", "quaternionic", "cayley", "mixed-complex", "kahler-angle-plane", "direct-sum"
    ] = "explicit"
    basis: Optional[List[List[float]]] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    parts: List["SubspaceSpec"] = Field(default_factory=list)

    @model_validator(mode="after")
    def _consistent(self) -> "SubspaceSpec":
        if self.construction == "explicit" and not self.basis:
            raise ValueError("explicit subspace needs a non-empty 'basis'")
        if self.construction != "explicit" and self.basis is not None:
            raise ValueError(
                f"'basis' is only allowed for explicit subspaces, not '{self.construction}'"
            )
        if self.construction == "direct-sum" and not self.parts:
            raise ValueError("direct-sum subspace needs 'parts'")
        return self


class ToleranceSpec(BaseModel):
    """Tolerance overrides; unset values keep the process defaults."""

    model_config = ConfigDict(extra="forbid")

    identity: Optional[float] = Field(default=None, gt=0)
    sampled: Optional[float] = Field(default=None, gt=0)
    angle: Optional[float] = Field(default=None, gt=0)
    constant: Optional[float] = Field(default=None, gt=0)
    spectrum: Optional[float] = Field(default=None, gt=0)
    symmetry: Optional[float] = Field(default=None, gt=0)
    membership: Optional[float] = Field(default=None, gt=0)

    def apply(self, base: Tolerances) -> Tolerances:
        """Base tolerances with the overrides of this spec."""
        return base.override(**self.model_dump())


class OutputSpec(BaseModel):
    """Report destination."""

    model_config = ConfigDict(extra="forbid")

    dir: Optional[Path] = None
    format: Literal["json", "csv"] = "json"


class RunConfig(BaseModel):
    """Validated run file; unset r_grid, samples and workers fall back to Config."""

    model_config = ConfigDict(extra="forbid")

    algebra: AlgebraSpec
    subspace: Optional[SubspaceSpec] = None
    r_grid: Optional[List[float]] = None
    samples: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None
    workers: Optional[int] = Field(default=None, ge=1)
    tolerances: ToleranceSpec = Field(default_factory=ToleranceSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @field_validator("r_grid")
    @classmethod
    def _positive_radii(cls, values: Optional[List[float]]) -> Optional[List[float]]:
        if values is None:
            return values
        if not values:
            raise ValueError("r_grid must not be empty")
        bad = [r for r in values if not r > 0]
        if bad:
            raise ValueError(f"tube radii must be positive, got {bad}")
        return values

    def hashable(self) -> Dict[str, Any]:
        """Plain-JSON form used for the report config hash."""
        return self.model_dump(mode="json")


def _format_validation(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"]) or "<root>"
        parts.append(f"{location}: {item['msg']}")
    return "; ".join(parts)


def parse_run_config(data: Any) -> RunConfig:
    """
    Validate an already parsed run document.

    Raises:
        ConfigError: If the document does not match the schema
    """
    if not isinstance(data, dict):
        raise ConfigError("Run file must contain a mapping at the top level")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid run file: {_format_validation(e)}") from e


def load_run_config(path: Path) -> RunConfig:
    """
    Load and validate a YAML run file.

    Args:
        path: Path to the run file

    Returns:
        RunConfig

    Raises:
        ConfigError: If the file is missing, not YAML, or fails validation
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read run file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Run file {path} is not valid YAML: {e}") from e
    config = parse_run_config(data)
    logger.debug(f"Loaded run file {path}")
    return config


def load_generators(
    path: Path, tol: Optional[float] = None, validate: bool = True
) -> HTypeAlgebra:
    """
    H-type algebra from a JSON descriptor {m, n, generators}.

    The Clifford relations are checked after loading unless validate is
    False (the verification battery reports them as a named check).

    Raises:
        ConfigError: If the file is unreadable or malformed
        CliffordRelationError: If the generators violate the relations
    """
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as f:
            data = json.load(f)
        generators = CliffordGenerators.from_dict(data)
    except OSError as e:
        raise ConfigError(f"Cannot read generators file {path}: {e}") from e
    except (ValueError, KeyError, TypeError, DimensionMismatchError) as e:
        raise ConfigError(f"Malformed generators file {path}: {e}") from e
    alg = HTypeAlgebra(generators=generators, name=path.stem)
    if validate:
        validate_algebra(alg, tol)
    return alg


def build_algebra(spec: AlgebraSpec, tol: Optional[float] = None) -> HTypeAlgebra:
    """
    H-type algebra named by the algebra section of a run file.

    Presets: complex-hyperbolic (m = 1, 𝔳 = C^(n-1)), quaternionic-hyperbolic
    (m = 3, 𝔳 = H^(n-1), J_1J_2 = J_3), cayley-plane (m = 7, n = 8) and
    heisenberg-type (m = 2, a non-symmetric space).

    Raises:
        ConfigError: If the algebra section cannot be built
        CliffordRelationError: If a generators file violates the relations
    """
    if spec.generators_file is not None:
        return load_generators(spec.generators_file, tol)
    try:
        if spec.preset == "complex-hyperbolic":
            return build_htype_algebra(1, spec.n - 1, name=f"complex-hyperbolic-n{spec.n}", tol=tol)
        if spec.preset == "quaternionic-hyperbolic":
            return quaternionic_model(spec.n).algebra
        if spec.preset == "cayley-plane":
            return build_htype_algebra(7, 1, name="cayley-plane", tol=tol)
        if spec.preset == "heisenberg-type":
            return build_htype_algebra(2, spec.copies, name="heisenberg-type", tol=tol)
        return build_htype_algebra(spec.m, spec.copies, tol=tol)
    except ValueError as e:
        raise ConfigError(f"Cannot build algebra: {e}") from e


def _quaternionic_model_of(alg: HTypeAlgebra) -> QuaternionicModel:
    if alg.z_dim != 3 or alg.v_dim % 4:
        raise ConfigError("quaternionic construction needs the quaternionic-hyperbolic preset")
    n = alg.v_dim // 4 + 1
    if not np.array_equal(quaternionic_model(n).algebra.gens, alg.gens):
        raise ConfigError("quaternionic construction needs the quaternionic-hyperbolic preset")
    return QuaternionicModel(n=n, algebra=alg)


def _params_floats(params: Dict[str, Any], key: str, count: int) -> List[float]:
    value = params.get(key)
    if not isinstance(value, (list, tuple)) or len(value) != count:
        raise ConfigError(f"parameter '{key}' must be a list of {count} numbers")
    return [float(v) for v in value]


def build_subspace(spec: SubspaceSpec, alg: HTypeAlgebra) -> Subspace:
    """
    Subspace 𝔴⊥ named by the subspace section of a run file.

    Raises:
        ConfigError: If the subspace section does not fit the algebra
        InfeasibleConstructionError: If construction parameters violate a
            feasibility inequality
    """
    params = spec.params
    try:
        if spec.construction == "explicit":
            return Subspace.from_vectors(
                alg, np.asarray(spec.basis, dtype=float),
                provenance={"construction": "explicit", "params": {}},
            )
        if spec.construction == "quaternionic":
            phis = _params_floats(params, "phi", 3)
            return quaternionic_subspace(
                _quaternionic_model_of(alg), *phis, block=int(params.get("block", 0))
            )
        if spec.construction == "cayley":
            k = int(params.get("k", 5))
            xi = np.asarray(params["xi"], dtype=float) if "xi" in params else np.eye(alg.v_dim)[0]
            zbasis = np.asarray(params["zbasis"], dtype=float) if "zbasis" in params else None
            return cayley_subspace(alg, k, xi, zbasis)
        if spec.construction == "mixed-complex":
            return mixed_complex_subspace(alg)
        if spec.construction == "kahler-angle-plane":
            if "theta" not in params:
                raise ConfigError("kahler-angle-plane needs parameter 'theta'")
            return kahler_angle_plane(alg, float(params["theta"]))
        return direct_sum([build_subspace(part, alg) for part in spec.parts])
    except (DimensionMismatchError, SubspaceError, ValueError, KeyError, TypeError) as e:
        raise ConfigError(f"Cannot build {spec.construction} subspace: {e}") from e


def describe(config: RunConfig) -> str:
    """One-line description for log messages."""
    algebra = config.algebra.preset or (
        f"m={config.algebra.m}" if config.algebra.m else str(config.algebra.generators_file)
    )
    construction = config.subspace.construction if config.subspace else "none"
    return (
        f"algebra={algebra}, subspace={construction}, "
        f"r_grid={config.r_grid}, samples={config.samples}"
    )
