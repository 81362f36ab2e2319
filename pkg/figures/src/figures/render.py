"""Deterministic matplotlib rendering plus plotted-array sidecars.

Every image is accompanied by ``<image>.json`` holding the exact arrays
that were drawn, so tests assert data rather than pixels.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .recipes import (
    FigureRecipe,
    build_heatmaps,
    build_line_panels,
    default_y_label,
    read_rows,
)

FIG_DPI = 150


def sidecar_path(output) -> Path:
    out = Path(output)
    return out.with_name(out.name + ".json")


def _render_lines(recipe: FigureRecipe, panels) -> dict:
    n = len(panels)
    cols = min(n, 3)
    rows_count = math.ceil(n / cols)
    fig, axes = plt.subplots(
        rows_count, cols, figsize=(4.0 * cols, 3.0 * rows_count), squeeze=False
    )
    for ax in axes.ravel()[n:]:
        ax.set_visible(False)
    for ax, panel in zip(axes.ravel(), panels):
        for series in panel.series:
            ax.plot(series.x, series.y, label=series.label)
        ax.set_title(panel.title, fontsize=10)
        ax.set_xlabel(recipe.x_label)
        ax.set_ylabel(recipe.y_label or default_y_label(recipe.preset))
        ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(recipe.output, dpi=FIG_DPI)
    plt.close(fig)
    return {
        "preset": recipe.preset,
        "inputs": list(recipe.inputs),
        "panels": [
            {
                "title": p.title,
                "series": [{"label": s.label, "x": s.x, "y": s.y} for s in p.series],
            }
            for p in panels
        ],
    }


def _render_heatmaps(recipe: FigureRecipe, panels) -> dict:
    n = len(panels)
    cols = min(n, 5)
    rows_count = math.ceil(n / cols)
    fig, axes = plt.subplots(
        rows_count, cols, figsize=(2.2 * cols, 2.2 * rows_count), squeeze=False
    )
    for ax in axes.ravel()[n:]:
        ax.set_visible(False)
    for ax, panel in zip(axes.ravel(), panels):
        image = ax.imshow(panel.matrix, vmin=0.0, vmax=0.5, cmap="viridis")
        ax.set_title(panel.title, fontsize=8)
        ax.set_xticks(range(len(panel.matrix)))
        ax.set_yticks(range(len(panel.matrix)))
        ax.set_xticklabels([str(k + 1) for k in range(len(panel.matrix))], fontsize=6)
        ax.set_yticklabels([str(k + 1) for k in range(len(panel.matrix))], fontsize=6)
    fig.colorbar(image, ax=axes.ravel().tolist(), shrink=0.8)
    fig.savefig(recipe.output, dpi=FIG_DPI)
    plt.close(fig)
    return {
        "preset": recipe.preset,
        "inputs": list(recipe.inputs),
        "heatmaps": [
            {"title": p.title, "k0d": p.k0d, "matrix": p.matrix} for p in panels
        ],
    }


def render(recipe: FigureRecipe) -> Path:
    """Render one preset to its image file; returns the sidecar path."""
    rows = read_rows(recipe.inputs)
    Path(recipe.output).parent.mkdir(parents=True, exist_ok=True)
    if recipe.preset == "fig4":
        payload = _render_heatmaps(recipe, build_heatmaps(rows))
    else:
        payload = _render_lines(recipe, build_line_panels(recipe, rows))
    side = sidecar_path(recipe.output)
    with open(side, "w") as fh:
        json.dump(payload, fh, indent=1)
    return side
