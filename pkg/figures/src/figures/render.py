"""Deterministic rendering of parityq datasets into PNG figures.

Same dataset + recipe produce byte-identical output: the Agg backend is
forced, figure geometry is fixed by the recipe, and the PNG ``Software``
metadata (which embeds the library version) is stripped.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .datasets import Dataset, DatasetError, load_csv
from .recipe import FigureRecipe, RecipeError

_CYCLE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _energy_columns(ds: Dataset, recipe: FigureRecipe) -> list:
    if recipe.columns:
        return recipe.columns
    cols = [c for c in ds.columns if c.startswith("E") and c[1:].isdigit()]
    if not cols:
        raise RecipeError(
            f"no energy columns in {ds.path}; available: " + ", ".join(ds.columns)
        )
    return cols


def _spectrum_axes(ds: Dataset, recipe: FigureRecipe, ax):
    x = ds.numeric(ds.columns[0])
    for i, name in enumerate(_energy_columns(ds, recipe)):
        ax.plot(x, ds.numeric(name), color=_CYCLE[i % len(_CYCLE)],
                lw=1.4, label=name)
    if recipe.marker_x is not None:
        ax.axvline(recipe.marker_x, color="0.4", ls="--", lw=1.0)
    ax.set_xlabel(recipe.xlabel or ds.columns[0])
    ax.set_ylabel(recipe.ylabel or "energy / h (GHz)")
    ax.legend(loc="best", fontsize=8, frameon=False)


def _wavefunction_axes(ds: Dataset, recipe: FigureRecipe, ax):
    n = ds.numeric("n")
    cols = recipe.columns or [c for c in ds.columns if c.startswith("p_state")]
    if not cols:
        raise RecipeError(
            f"no probability columns in {ds.path}; available: "
            + ", ".join(ds.columns)
        )
    width = 0.8 / len(cols)
    for i, name in enumerate(cols):
        ax.bar(n + (i - (len(cols) - 1) / 2.0) * width, ds.numeric(name),
               width=width, color=_CYCLE[i % len(_CYCLE)], label=name)
    ax.set_xlabel(recipe.xlabel or "Cooper-pair number n")
    ax.set_ylabel(recipe.ylabel or "probability")
    ax.legend(loc="best", fontsize=8, frameon=False)


def _matrix_element_axes(ds: Dataset, recipe: FigureRecipe, ax):
    x = ds.numeric(ds.columns[0])
    cols = recipe.columns or ["g_y", "g_yz"]
    for i, name in enumerate(cols):
        ax.plot(x, ds.numeric(name) * 1e3, color=_CYCLE[i % len(_CYCLE)],
                lw=1.4, label=name)
    ax.set_xlabel(recipe.xlabel or ds.columns[0])
    ax.set_ylabel(recipe.ylabel or "coupling / h (MHz)")
    ax.axhline(0.0, color="0.8", lw=0.8)
    ax.legend(loc="best", fontsize=8, frameon=False)


_DRAWERS = {
    "flux-spectrum": _spectrum_axes,
    "dispersion": _spectrum_axes,
    "wavefunction": _wavefunction_axes,
    "matrix-elements": _matrix_element_axes,
}


def render(recipe: FigureRecipe) -> str:
    """Render the recipe to its output path; returns the path written."""
    ds = load_csv(recipe.input)
    fig, ax = plt.subplots(figsize=(recipe.width, recipe.height))
    try:
        _DRAWERS[recipe.kind](ds, recipe, ax)
        if recipe.title:
            ax.set_title(recipe.title, fontsize=10)
        fig.tight_layout()
        fig.savefig(
            recipe.out,
            dpi=recipe.dpi,
            format="png",
            metadata={"Software": None},  # strip version text for byte stability
        )
    finally:
        plt.close(fig)
    return recipe.out
