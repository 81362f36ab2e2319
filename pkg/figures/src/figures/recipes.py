"""Figure recipes: which CSV columns become panels, series and axes.

Input files follow the sweep schema ``initial,s,k0d,quantity,i,j,value``.
A recipe groups rows into panels and labelled series (or heatmap matrices
for the concurrence-matrix layout) without recomputing any physics.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

REQUIRED_COLUMNS = ("initial", "s", "k0d", "quantity", "i", "j", "value")

PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6")


class FigureError(ValueError):
    """Unusable input data or recipe."""


@dataclass(frozen=True)
class FigureRecipe:
    preset: str
    inputs: tuple[str, ...]
    output: str
    x_label: str = "k0d / pi"
    y_label: str = ""

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise FigureError(f"unknown preset {self.preset!r}; known: {PRESETS}")
        if not self.inputs:
            raise FigureError("at least one input file is required")


@dataclass
class Series:
    label: str
    x: list[float] = field(default_factory=list)
    y: list[float] = field(default_factory=list)


@dataclass
class Panel:
    title: str
    series: list[Series] = field(default_factory=list)


@dataclass
class HeatmapPanel:
    title: str
    k0d: float
    matrix: list[list[float]]


def read_rows(paths) -> list[dict]:
    rows = []
    for path in paths:
        path = Path(path)
        if not path.exists():
            raise FigureError(f"input file {path} does not exist")
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            missing = [c for c in REQUIRED_COLUMNS if c not in header]
            if missing:
                raise FigureError(f"{path} is missing columns {missing}")
            for record in reader:
                rows.append(
                    {
                        "initial": record["initial"],
                        "s": float(record["s"]),
                        "k0d": float(record["k0d"]),
                        "quantity": record["quantity"],
                        "i": record["i"],
                        "j": record["j"],
                        "value": float(record["value"]),
                    }
                )
    if not rows:
        raise FigureError("no data rows in input files")
    return rows


def _ordered_unique(values):
    seen = []
    for v in values:
        if v not in seen:
            seen.append(v)
    return seen


def _series_from(rows, panel_rows, group_key, label_fn) -> list[Series]:
    series = []
    for key in _ordered_unique(group_key(r) for r in panel_rows):
        members = [r for r in panel_rows if group_key(r) == key]
        s = Series(label=label_fn(key))
        for r in sorted(members, key=lambda r: r["k0d"]):
            s.x.append(r["k0d"] / float(np.pi))
            s.y.append(r["value"])
        series.append(s)
    if not series or any(len(s.x) == 0 for s in series):
        raise FigureError("empty series after grouping")
    return series


def _pair_label(row) -> str:
    return f"C_{row['i']}{row['j']}"


def build_line_panels(recipe: FigureRecipe, rows) -> list[Panel]:
    preset = recipe.preset
    panels = []
    if preset == "fig2":
        wanted = [r for r in rows if r["quantity"] == "pairwise_concurrence"]
        for initial in _ordered_unique(r["initial"] for r in wanted):
            members = [r for r in wanted if r["initial"] == initial]
            panels.append(
                Panel(
                    title=f"initial |{initial}>",
                    series=_series_from(rows, members, lambda r: r["s"],
                                        lambda s: f"s = {s:g}"),
                )
            )
    elif preset == "fig3":
        wanted = [r for r in rows if r["quantity"] == "pairwise_concurrence"]
        for initial in _ordered_unique(r["initial"] for r in wanted):
            for pair in _ordered_unique(
                (r["i"], r["j"]) for r in wanted if r["initial"] == initial
            ):
                members = [
                    r
                    for r in wanted
                    if r["initial"] == initial and (r["i"], r["j"]) == pair
                ]
                panels.append(
                    Panel(
                        title=f"|{initial}>  C_{pair[0]}{pair[1]}",
                        series=_series_from(rows, members, lambda r: r["s"],
                                            lambda s: f"s = {s:g}"),
                    )
                )
    elif preset == "fig5":
        wanted = [r for r in rows if r["quantity"] == "atom_photon_negativity"]
        for initial in _ordered_unique(r["initial"] for r in wanted):
            members = [r for r in wanted if r["initial"] == initial]
            panels.append(
                Panel(
                    title=f"N = {len(initial)}",
                    series=_series_from(
                        rows,
                        members,
                        lambda r: (r["s"], r["i"]),
                        lambda key: f"s = {key[0]:g}, atom {key[1]}",
                    ),
                )
            )
    elif preset == "fig6":
        wanted = [r for r in rows if r["quantity"] == "two_photon_negativity"]
        panels.append(
            Panel(
                title="photon pair",
                series=_series_from(
                    rows,
                    wanted,
                    lambda r: (r["initial"], r["s"]),
                    lambda key: f"N = {len(key[0])}, s = {key[1]:g}",
                ),
            )
        )
    else:
        raise FigureError(f"{preset} is not a line-plot preset")
    if not panels:
        raise FigureError(f"no rows usable for preset {preset}")
    return panels


def build_heatmaps(rows) -> list[HeatmapPanel]:
    """Concurrence-matrix layout: one N x N matrix per initial state."""
    wanted = [r for r in rows if r["quantity"] == "pairwise_concurrence"]
    if not wanted:
        raise FigureError("no pairwise-concurrence rows for the heatmap layout")
    panels = []
    for initial in _ordered_unique(r["initial"] for r in wanted):
        members = [r for r in wanted if r["initial"] == initial]
        k0d = members[0]["k0d"]
        at_first = [r for r in members if r["k0d"] == k0d]
        n = len(initial)
        matrix = np.zeros((n, n))
        for r in at_first:
            i, j = int(r["i"]) - 1, int(r["j"]) - 1
            matrix[i, j] = matrix[j, i] = r["value"]
        panels.append(HeatmapPanel(title=f"|{initial}>", k0d=k0d, matrix=matrix.tolist()))
    return panels


def default_y_label(preset: str) -> str:
    return {
        "fig2": "concurrence C_12",
        "fig3": "pairwise concurrence",
        "fig4": "pairwise concurrence",
        "fig5": "E_ph|j",
        "fig6": "E_ph|ph",
    }[preset]
