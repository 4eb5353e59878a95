"""Core module: configuration, logging, errors, run files, reports and verification."""

from drisoparam.core.config import DEFAULT_TOLERANCES, Config, Tolerances
from drisoparam.core.logger import setup_logger

__all__ = ["Config", "DEFAULT_TOLERANCES", "Tolerances", "setup_logger"]
