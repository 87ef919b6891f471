#!/usr/bin/env python3

"""
nanoexpand Launcher

Runs the command-line interface from a source checkout without installing
the package.
"""

import sys
from pathlib import Path

# Add current directory to Python path
current_dir = Path(__file__).parent
sys.path.insert(0, str(current_dir))


if __name__ == "__main__":
    if not (current_dir / "nanoexpand").exists():
        print("❌ Error: nanoexpand package not found!", file=sys.stderr)
        print("Make sure you're running this script from the project root.", file=sys.stderr)
        sys.exit(1)

    # Check virtual environment
    venv_path = current_dir / ".venv"
    if venv_path.exists() and sys.prefix == sys.base_prefix:
        print("⚠️  Warning: Virtual environment not activated!", file=sys.stderr)
        print("Run: source .venv/bin/activate", file=sys.stderr)

    try:
        import numpy  # noqa: F401
        import scipy  # noqa: F401
        import pydantic  # noqa: F401
        import psutil  # noqa: F401
    except ImportError as e:
        print(f"❌ Error: dependency missing ({e.name})", file=sys.stderr)
        print("Install with: pip install -r requirements.txt", file=sys.stderr)
        sys.exit(1)

    from nanoexpand.cli.main import main

    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n👋 Stopped by user", file=sys.stderr)
        sys.exit(130)
