"""Publication-style figures from lambda-relax sweep CSV files."""

from .recipes import PRESETS, FigureError, FigureRecipe, read_rows
from .render import render, sidecar_path

__version__ = "0.1.0"
