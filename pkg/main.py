#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Outer Billiards - Main Entry Point

Command line toolkit for outer billiards with contraction about convex
polygons: orbits, continuity cells, periodicity certificates, basins of
attraction and the polynomial measure bounds behind genericity.

Version: 1.0.0
Python: 3.9+
"""

import sys
from pathlib import Path

# Add the project root to Python path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from ui.cli import parse_and_dispatch  # noqa: E402


def main():
    """Main application entry point."""
    sys.exit(parse_and_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
