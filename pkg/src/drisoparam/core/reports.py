"""
Report Writer.

Serializes angle, spectrum and verification reports to JSON (sorted keys,
no timestamps) or CSV. Files are written to a temporary sibling first and
moved into place, so a report on disk is always complete.
"""

import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and nested containers to JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Path):
        return str(value)
    return value


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def config_hash(config: Dict[str, Any]) -> str:
    """SHA-256 of the compact canonical JSON of a configuration."""
    text = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_text_atomic(path: Path, text: str) -> Path:
    """Write text through a temporary file and os.replace."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8", newline="\n") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(str(tmp), str(path))
    return path


def write_json_atomic(path: Path, obj: Any) -> Path:
    """Write canonical JSON atomically."""
    return write_text_atomic(path, canonical_json(obj))


def write_csv_atomic(
    path: Path, frame: pd.DataFrame, header: Optional[Dict[str, Any]] = None
) -> Path:
    """
    Write a DataFrame as CSV atomically.

    Header fields go first as `# key: value` lines; read the table back with
    pd.read_csv(path, comment="#").
    """
    lines = [
        f"# {key}: {'null' if value is None else value}\n" for key, value in (header or {}).items()
    ]
    return write_text_atomic(path, "".join(lines) + frame.to_csv(index=False, lineterminator="\n"))


def angle_rows(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per sample of a serialized angle report, one column per angle."""
    rows = []
    for sample, entry in enumerate(report["samples"]):
        row = {"sample": sample, "m1": entry["m1"], "m2": entry["m2"]}
        row.update({f"phi_{i}": angle for i, angle in enumerate(entry["angles"], start=1)})
        rows.append(row)
    return pd.DataFrame(rows)


def spectrum_rows(scans: List[Dict[str, Any]]) -> pd.DataFrame:
    """One row per (radius, sample, eigenvalue) of serialized spectrum scans."""
    rows = []
    for scan in scans:
        for sample, entry in enumerate(scan["samples"]):
            for index, value in enumerate(entry["eigenvalues"], start=1):
                rows.append({
                    "r": scan["r"],
                    "sample": sample,
                    "index": index,
                    "eigenvalue": value,
                    "trace": entry["trace"],
                    "mean_curvature": scan["mean_curvature"],
                })
    columns = ["r", "sample", "index", "eigenvalue", "trace", "mean_curvature"]
    return pd.DataFrame(rows, columns=columns)


def check_rows(report: Dict[str, Any]) -> pd.DataFrame:
    """One row per verification check."""
    return pd.DataFrame(
        report["checks"], columns=["name", "residual", "tolerance", "passed", "detail"]
    )


class ReportWriter:
    """Writes reports with a common header into an output directory."""

    def __init__(
        self,
        output_dir: Path,
        tool_version: str,
        seed: Optional[int],
        config: Dict[str, Any],
        fmt: str = "json",
    ):
        """
        Initialize report writer.

        Args:
            output_dir: Directory receiving the reports
            tool_version: Version recorded in every report
            seed: Seed of the sampled run (None for unsampled runs)
            config: Effective run configuration (hashed into the header)
            fmt: "json" or "csv"
        """
        if fmt not in ("json", "csv"):
            raise ValueError(f"Unknown report format '{fmt}'")
        self.output_dir = Path(output_dir)
        self.fmt = fmt
        self.header = {
            "tool_version": tool_version,
            "seed": seed,
            "config_hash": config_hash(config),
        }

    def wrap(self, kind: str, payload: Dict[str, Any]) -> Dict[str, Any]:
        """Report body with header fields."""
        return {"report": kind, **self.header, **payload}

    def write(self, name: str, kind: str, payload: Dict[str, Any], frame: pd.DataFrame) -> Path:
        """
        Write a report in the configured format.

        Args:
            name: File stem
            kind: Report kind recorded in the header
            payload: Report body
            frame: Tabular view used for CSV output (header fields become comment lines)

        Returns:
            Path of the written file
        """
        if self.fmt == "csv":
            path = write_csv_atomic(
                self.output_dir / f"{name}.csv", frame, {"report": kind, **self.header}
            )
        else:
            path = write_json_atomic(self.output_dir / f"{name}.json", self.wrap(kind, payload))
        logger.info(f"Report written: {path}")
        return path
