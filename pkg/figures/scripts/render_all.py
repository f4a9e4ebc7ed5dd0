#!/usr/bin/env python3
"""Render all eight reference figures from vise CSV data (see --help)."""
import sys

from vise_figures.cli import main

if __name__ == "__main__":
    sys.exit(main(["render-all", *sys.argv[1:]]))
