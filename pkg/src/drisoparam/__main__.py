"""
Main entry point for drisoparam.
"""

import sys
from typing import Optional, Sequence

from drisoparam.core.config import Config
from drisoparam.core.logger import setup_logger


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Main entry point for the command-line tool.

    Returns:
        int: Exit code (see drisoparam.cli)
    """
    config = Config()
    logger = setup_logger(
        "drisoparam",
        log_file=config.log_file or None,
        log_level=config.log_level,
        max_bytes=config.log_max_size,
        backup_count=config.log_backup_count,
    )
    logger.debug(f"Configuration loaded: {config}")

    # imported late so the logger is configured before module loggers emit
    from drisoparam.cli import main as cli_main

    return cli_main(argv, config)


if __name__ == "__main__":
    sys.exit(main())
