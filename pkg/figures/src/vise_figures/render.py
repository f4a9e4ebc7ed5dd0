"""Render dispatch and deterministic image saving."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .plots import build_figure
from .recipes import RECIPES, resolve_inputs
from .schema import SchemaError

__all__ = ["render", "render_all"]

# Per-format metadata that strips timestamps so identical inputs yield
# byte-identical images.
_METADATA = {
    ".png": {"Software": "vise-figures"},
    ".pdf": {"CreationDate": None},
    ".svg": {"Date": None},
}


def render(figure_id: int, data_dir: str, out_path: str) -> str:
    """Render one reference figure from its CSV inputs.

    Raises SchemaError on missing inputs, missing columns, empty files, or
    ragged grids; raises OSError for unwritable outputs.
    """
    if figure_id not in RECIPES:
        raise SchemaError(f"unknown figure id {figure_id}; expected 1..8")
    recipe = RECIPES[figure_id]
    paths = resolve_inputs(recipe, data_dir)
    fig = build_figure(recipe, paths)
    try:
        ext = os.path.splitext(out_path)[1].lower()
        kwargs = {"metadata": _METADATA[ext]} if ext in _METADATA else {}
        fig.savefig(out_path, dpi=150, **kwargs)
    finally:
        plt.close(fig)
    return out_path


def render_all(data_dir: str, out_dir: str, image_format: str = "png") -> list[str]:
    """Render figures 1..8 into ``out_dir``; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for figure_id in sorted(RECIPES):
        out_path = os.path.join(out_dir, f"figure{figure_id}.{image_format}")
        written.append(render(figure_id, data_dir, out_path))
    return written
