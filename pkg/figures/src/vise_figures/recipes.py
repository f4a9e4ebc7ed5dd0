"""Figure recipes: which CSV files feed which plot kind."""

from __future__ import annotations

import glob
import os
from dataclasses import dataclass

from .schema import SchemaError

__all__ = ["FigureRecipe", "RECIPES", "resolve_inputs"]


@dataclass(frozen=True)
class FigureRecipe:
    """What one figure is built from.

    patterns are glob patterns relative to the data directory; required
    names the documented columns each matched CSV must carry (mask files
    use the dedicated mask reader instead).
    """

    figure_id: int
    kind: str  # line_set | value_surfaces | t0_surfaces | t0_curves | region_overlay | scatter_step
    patterns: tuple[str, ...]
    required: tuple[str, ...]
    title: str
    xlabel: str
    ylabel: str


RECIPES: dict[int, FigureRecipe] = {
    1: FigureRecipe(
        1, "line_set", ("figure1.csv",), ("t", "egoist", "group", "society"),
        "Expected one-step capital increments", "claims threshold t", "expected increment",
    ),
    2: FigureRecipe(
        2, "value_surfaces", ("figure2.csv",),
        ("t_over_sigma", "delta", "egoist", "group", "society", "group_minus_egoist"),
        "Expected increments, unfavourable environment", "t / sigma", "delta",
    ),
    3: FigureRecipe(
        3, "value_surfaces", ("figure3.csv",),
        ("t_over_sigma", "delta", "egoist", "group", "society", "group_minus_egoist"),
        "Expected increments, favourable environment", "t / sigma", "delta",
    ),
    4: FigureRecipe(
        4, "line_set", ("figure4.csv",), ("t", "egoist", "group", "society"),
        "Surface sections at delta = 0.5", "claims threshold t / sigma", "expected increment",
    ),
    5: FigureRecipe(
        5, "t0_surfaces", ("figure5a.csv", "figure5b.csv"), ("delta", "t0"),
        "Optimal claims threshold", "delta", "t0",
    ),
    6: FigureRecipe(
        6, "t0_curves", ("figure6_alpha*.csv",), ("delta", "t0"),
        "Optimal claims threshold by majority threshold", "delta", "t0",
    ),
    7: FigureRecipe(
        7, "region_overlay", ("figure7_alpha*_fixed_mask.csv",), (),
        "Pit of losses: t = 0 (light) vs t = t0 (dark)", "delta", "mu / sigma",
    ),
    8: FigureRecipe(
        8, "scatter_step", ("figure8_n*.csv",), ("alpha", "delta_max"),
        "Largest egoist share neutralized by the optimal claims threshold",
        "majority threshold alpha", "delta_max",
    ),
}


def resolve_inputs(recipe: FigureRecipe, data_dir: str) -> list[str]:
    """Expand the recipe's patterns against the data directory, sorted."""
    paths: list[str] = []
    for pattern in recipe.patterns:
        matches = sorted(glob.glob(os.path.join(data_dir, pattern)))
        if not matches:
            raise SchemaError(
                f"figure {recipe.figure_id}: no input matching {pattern!r} in {data_dir}"
            )
        paths.extend(matches)
    return paths
