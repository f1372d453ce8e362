"""``figures render --recipe <file>``: one process per figure, no shared state."""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .datasets import DatasetError
from .recipe import RecipeError, load_recipe
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="figures", description="Render parityq CLI datasets into figures"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render")
    p.add_argument("--recipe", required=True)
    args = parser.parse_args(argv)
    try:
        out = render(load_recipe(args.recipe))
    except (RecipeError, DatasetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
