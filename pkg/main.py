#!/usr/bin/env python3
"""
Main entry point for drisoparam.

Runs the command-line tool from a source checkout without installing it.
"""

import sys
from pathlib import Path


def main() -> int:
    """Run drisoparam with the src directory on the module path."""
    project_root = Path(__file__).parent.resolve()

    src_path = project_root / "src"
    if str(src_path) not in sys.path:
        sys.path.insert(0, str(src_path))

    try:
        from drisoparam.__main__ import main as app_main
    except ImportError as e:
        print(f"Error: Failed to import drisoparam: {e}", file=sys.stderr)
        print(f"Python path: {sys.path}", file=sys.stderr)
        return 4
    return app_main()


if __name__ == "__main__":
    sys.exit(main())
