"""The four plot kinds used by the reference figures."""

from __future__ import annotations

import os
import re

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap

from .recipes import FigureRecipe
from .schema import SchemaError, read_columns, read_mask

__all__ = ["build_figure"]

_LINE_STYLES = ("solid", "dashed", "dotted", "dashdot")


def _pivot(x: np.ndarray, y: np.ndarray, z: np.ndarray, path: str):
    """Reshape a row-major long table onto its (x, y) grid."""
    xs = np.unique(x)
    ys = np.unique(y)
    if len(xs) * len(ys) != len(z):
        raise SchemaError(
            f"{path}: rows do not form a complete {len(xs)}x{len(ys)} grid ({len(z)} rows)"
        )
    return xs, ys, z.reshape(len(xs), len(ys))


def _line_set(recipe: FigureRecipe, paths: list[str], fig) -> None:
    data = read_columns(paths[0], recipe.required)
    ax = fig.add_subplot(111)
    x = data[recipe.required[0]]
    for i, (column, label) in enumerate(
        (("group", "group member (1)"), ("egoist", "egoist (2)"), ("society", "random participant (3)"))
    ):
        ax.plot(x, data[column], label=label, linestyle=_LINE_STYLES[i], color="black", lw=1.2)
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.legend(frameon=False)


def _value_surfaces(recipe: FigureRecipe, paths: list[str], fig) -> None:
    data = read_columns(paths[0], recipe.required)
    panels = (
        ("egoist", "(a) egoist"),
        ("group", "(b) group member"),
        ("society", "(c) random participant"),
        ("group_minus_egoist", "(d) group minus egoist"),
    )
    for i, (column, label) in enumerate(panels, start=1):
        ts, ds, z = _pivot(data["t_over_sigma"], data["delta"], data[column], paths[0])
        ax = fig.add_subplot(2, 2, i, projection="3d")
        tt, dd = np.meshgrid(ts, ds, indexing="ij")
        ax.plot_surface(tt, dd, z, cmap="viridis", linewidth=0, antialiased=False)
        ax.set_title(label, fontsize=9)
        ax.set_xlabel(recipe.xlabel, fontsize=7)
        ax.set_ylabel(recipe.ylabel, fontsize=7)
        ax.tick_params(labelsize=6)


def _t0_surfaces(recipe: FigureRecipe, paths: list[str], fig) -> None:
    specs = (("alpha", "(a) over (delta, alpha)"), ("mu", "(b) over (delta, mu)"))
    for i, (path, (second, label)) in enumerate(zip(paths, specs), start=1):
        data = read_columns(path, ("delta", second, "t0"))
        ds, ys, z = _pivot(data["delta"], data[second], data["t0"], path)
        ax = fig.add_subplot(1, 2, i, projection="3d")
        dd, yy = np.meshgrid(ds, ys, indexing="ij")
        ax.plot_surface(dd, yy, z, cmap="viridis", linewidth=0, antialiased=False)
        ax.set_title(label, fontsize=9)
        ax.set_xlabel("delta", fontsize=7)
        ax.set_ylabel(second, fontsize=7)
        ax.set_zlabel("t0", fontsize=7)
        ax.tick_params(labelsize=6)


def _alpha_from_name(path: str, prefix: str) -> str:
    m = re.search(prefix + r"([0-9.]+)", os.path.basename(path))
    return m.group(1).rstrip(".") if m else os.path.basename(path)


def _t0_curves(recipe: FigureRecipe, paths: list[str], fig) -> None:
    ax = fig.add_subplot(111)
    ordered = sorted(paths, key=lambda p: float(_alpha_from_name(p, "alpha")))
    for i, path in enumerate(ordered):
        data = read_columns(path, recipe.required)
        alpha = _alpha_from_name(path, "alpha")
        ax.plot(
            data["delta"], data["t0"],
            label=f"alpha={alpha} ({i + 1})",
            linestyle=_LINE_STYLES[i % len(_LINE_STYLES)],
            color=str(0.0 + 0.15 * (i % 4)),
            lw=1.2,
        )
    ax.axhline(0.0, color="0.8", lw=0.6)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.legend(frameon=False, fontsize=8)


def _region_overlay(recipe: FigureRecipe, fixed_paths: list[str], fig) -> None:
    cmap = ListedColormap(["white", "0.75", "0.4"])
    for i, fixed_path in enumerate(fixed_paths, start=1):
        optimal_path = fixed_path.replace("_fixed_mask.csv", "_optimal_mask.csv")
        if not os.path.exists(optimal_path):
            raise SchemaError(f"missing companion mask {optimal_path}")
        mu_f, d_f, fixed = read_mask(fixed_path)
        mu_o, d_o, optimal = read_mask(optimal_path)
        if fixed.shape != optimal.shape:
            raise SchemaError(
                f"{fixed_path} and {optimal_path}: mask shapes differ "
                f"({fixed.shape} vs {optimal.shape})"
            )
        combined = np.where(optimal > 0, 2, np.where(fixed > 0, 1, 0))
        ax = fig.add_subplot(1, len(fixed_paths), i)
        ax.pcolormesh(d_f, mu_f, combined, cmap=cmap, vmin=0, vmax=2, shading="nearest")
        ax.set_title(f"alpha = {_alpha_from_name(fixed_path, 'alpha')}", fontsize=9)
        ax.set_xlabel(recipe.xlabel, fontsize=8)
        if i == 1:
            ax.set_ylabel(recipe.ylabel, fontsize=8)
        ax.tick_params(labelsize=7)


def _scatter_step(recipe: FigureRecipe, paths: list[str], fig) -> None:
    ax = fig.add_subplot(111)
    shades = ("0.6", "black", "0.3", "0.8")
    ordered = sorted(paths, key=lambda p: -float(_alpha_from_name(p, "n")))
    for i, path in enumerate(ordered):
        data = read_columns(path, recipe.required)
        n = _alpha_from_name(path, "n")
        color = shades[i % len(shades)]
        ax.plot(
            data["alpha"], data["delta_max"],
            drawstyle="steps-post", color=color, lw=0.8, alpha=0.7,
        )
        ax.scatter(data["alpha"], data["delta_max"], s=8, color=color, label=f"n = {n} ({i + 1})")
    lim = (0.0, 1.0)
    ax.plot(lim, lim, color="0.85", lw=0.8, zorder=0)  # y = x reference
    ax.set_xlim(*lim)
    ax.set_ylim(*lim)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.legend(frameon=False, fontsize=8)


_SIZES = {
    "line_set": (6.0, 4.0),
    "value_surfaces": (9.0, 7.0),
    "t0_surfaces": (9.0, 4.0),
    "t0_curves": (6.0, 4.0),
    "region_overlay": (9.0, 3.2),
    "scatter_step": (5.0, 5.0),
}


def build_figure(recipe: FigureRecipe, paths: list[str]):
    """Build (but do not save) the matplotlib figure for a recipe."""
    fig = plt.figure(figsize=_SIZES[recipe.kind])
    builder = {
        "line_set": _line_set,
        "value_surfaces": _value_surfaces,
        "t0_surfaces": _t0_surfaces,
        "t0_curves": _t0_curves,
        "region_overlay": _region_overlay,
        "scatter_step": _scatter_step,
    }[recipe.kind]
    try:
        builder(recipe, paths, fig)
    except Exception:
        plt.close(fig)
        raise
    fig.suptitle(recipe.title, fontsize=10)
    return fig
