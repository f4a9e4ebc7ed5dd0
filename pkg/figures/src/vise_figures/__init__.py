"""Renderers for the eight ViSE reference figures.

This package reads only the documented CSV outputs of the ``vise`` CLI
(see the primary package's FORMATS.md) and never recomputes model math:
the CSV files are the single source of numerical truth.  Rendering is a
pure function of the input files; rerunning with identical inputs and
library versions produces byte-identical images.
"""

from .recipes import RECIPES, FigureRecipe
from .render import render, render_all
from .schema import SchemaError, read_columns

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "FigureRecipe",
    "RECIPES",
    "render",
    "render_all",
    "SchemaError",
    "read_columns",
]
