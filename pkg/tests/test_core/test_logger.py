"""Tests for logger setup."""

import io
import logging

from drisoparam.core.logger import setup_logger


def test_file_and_console_handlers(tmp_path):
    """Test that messages reach the log file and the console stream."""
    log_file = tmp_path / "logs" / "run.log"
    stream = io.StringIO()
    logger = setup_logger("drisoparam.test", str(log_file), "DEBUG", stream=stream)
    logger.info("tube scan started")
    for handler in logger.handlers:
        handler.flush()
    assert "tube scan started" in log_file.read_text(encoding="utf-8")
    assert "tube scan started" in stream.getvalue()
    for handler in logger.handlers:
        handler.close()


def test_without_file():
    """Test that log_file=None installs only the console handler."""
    logger = setup_logger("drisoparam.console", None, "WARNING", stream=io.StringIO())
    assert len(logger.handlers) == 1
    assert logger.level == logging.WARNING


def test_setup_replaces_handlers():
    """Test that repeated setup does not duplicate handlers."""
    setup_logger("drisoparam.repeat", None, stream=io.StringIO())
    logger = setup_logger("drisoparam.repeat", None, stream=io.StringIO())
    assert len(logger.handlers) == 1


def test_unknown_level_falls_back_to_info():
    """Test the INFO fallback for unknown level names."""
    logger = setup_logger("drisoparam.level", None, "CHATTY", stream=io.StringIO())
    assert logger.level == logging.INFO
