"""Figure recipes: flat INI descriptions of what to draw from which dataset."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field

KINDS = ("dispersion", "flux-spectrum", "wavefunction", "matrix-elements")


class RecipeError(ValueError):
    """Invalid or incomplete figure recipe."""


@dataclass
class FigureRecipe:
    kind: str
    input: str
    out: str
    title: str = ""
    columns: list = field(default_factory=list)  # dataset columns to draw
    marker_x: float | None = None  # vertical marker (e.g. anti-crossing flux)
    xlabel: str = ""
    ylabel: str = ""
    dpi: int = 150
    width: float = 6.4
    height: float = 4.8

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RecipeError(
                f"unknown figure kind {self.kind!r}; expected one of {KINDS}"
            )
        if not self.input:
            raise RecipeError("recipe needs an input dataset path")
        if not self.out:
            raise RecipeError("recipe needs an output image path")


_KEYS = {
    "kind": str,
    "input": str,
    "out": str,
    "title": str,
    "columns": str,
    "marker_x": float,
    "xlabel": str,
    "ylabel": str,
    "dpi": int,
    "width": float,
    "height": float,
}


def load_recipe(path: str) -> FigureRecipe:
    cfg = configparser.ConfigParser()
    if not cfg.read(path):
        raise RecipeError(f"recipe file not found: {path}")
    if "figure" not in cfg:
        raise RecipeError(f"{path}: missing [figure] section")
    section = cfg["figure"]
    for key in section:
        if key not in _KEYS:
            raise RecipeError(f"{path}: unknown recipe key {key!r}")
    values = {}
    for key, typ in _KEYS.items():
        if key not in section:
            continue
        raw = section[key]
        if key == "columns":
            values[key] = [c.strip() for c in raw.split(",") if c.strip()]
            continue
        try:
            values[key] = typ(raw)
        except ValueError as exc:
            raise RecipeError(f"{path}: {key} = {raw!r}: {exc}") from None
    for required in ("kind", "input", "out"):
        if required not in values:
            raise RecipeError(f"{path}: missing required key {required!r}")
    return FigureRecipe(**values)
