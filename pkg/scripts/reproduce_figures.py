#!/usr/bin/env python3
"""Drive the CLI through every figure recipe (and the bifurcation diagram),
then optionally render SVG panels with the plotgen frontend.

    python scripts/reproduce_figures.py --out out/figures
    python scripts/reproduce_figures.py --out out/figures --fast --plots

--fast trades resolution for speed (coarser grids, shorter horizon):
useful for smoke runs; drop it to reproduce the full-resolution data.
"""

import argparse
import shutil
import subprocess
import sys

FIGURES = [
    "fig3", "fig4a", "fig4b", "fig4c", "fig4d",
    "fig5", "fig7", "fig8",
    "fig9a", "fig9b", "fig9c", "fig9d",
]

PLOT_RECIPES = ["fig2b", "fig3", "fig4", "fig5", "fig7", "fig8", "fig9"]

FAST_OVERRIDES = [
    "--set", "grid.n_cells=96",
    "--set", "solver.t_end=10.0",
    "--set", "path.t_end=10.0",
]


def run(cmd: list[str]) -> None:
    print("+", " ".join(cmd))
    subprocess.run(cmd, check=True)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/figures")
    parser.add_argument("--fast", action="store_true", help="coarse, quick settings")
    parser.add_argument(
        "--plots", action="store_true", help="render SVGs with the plotgen frontend"
    )
    args = parser.parse_args()

    base = [sys.executable, "-m", "stochpop"]
    overrides = FAST_OVERRIDES if args.fast else []

    run(base + ["diagram", "--out", args.out])
    for figure in FIGURES:
        run(base + ["reproduce-figure", figure, "--out", args.out] + overrides)

    if args.plots:
        plotgen = shutil.which("plotgen")
        node_cli = ["node", "frontend/dist/cli.js"]
        for recipe in PLOT_RECIPES:
            cmd = [plotgen] if plotgen else node_cli
            run(cmd + [recipe, "--in", args.out, "--out", args.out])
    return 0


if __name__ == "__main__":
    sys.exit(main())
