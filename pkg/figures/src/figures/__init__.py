"""Figure rendering for parityq CLI artifacts.

Consumes the CSV/JSON datasets emitted by the ``parityq`` command line and
renders them into deterministic PNG figures.  No physics is recomputed here:
the datasets are the single source of numerical truth.
"""

from .recipe import FigureRecipe, RecipeError, load_recipe
from .datasets import Dataset, DatasetError, load_csv, load_json
from .render import render

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DatasetError",
    "FigureRecipe",
    "RecipeError",
    "load_csv",
    "load_json",
    "load_recipe",
    "render",
]
