#!/usr/bin/env python3
"""Render reference figure 3 from vise CSV data (see --help)."""
import sys

from vise_figures.cli import main

if __name__ == "__main__":
    sys.exit(main(["render", "3", *sys.argv[1:]]))
