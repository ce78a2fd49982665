"""Increment cross-covariance panels: analytic curve vs sampled markers.

Input: one or more cov_<variant>_<h1>_<h2>.csv exports; one panel per
file. The analytic curve is dashed, Monte Carlo estimates are circles
with error bars.

Usage: python fig_cross_covariance.py --in cov_*.csv --out fig45.png
"""

from __future__ import annotations

import argparse

import matplotlib.pyplot as plt
import numpy as np

from figcommon import ANALYTIC, MARKERS, load_table, require_columns, run_main


def build_figure(csv_paths: list[str]):
    n = len(csv_paths)
    fig, axes = plt.subplots(1, n, figsize=(3.0 * n, 2.9), squeeze=False)
    for ax, path in zip(axes[0], csv_paths):
        meta, cols = load_table(path)
        require_columns(cols, ["h", "analytic", "estimate", "se"], path)
        h = np.asarray(cols["h"])
        ax.plot(h, cols["analytic"], color="C0", label="analytic", **ANALYTIC)
        ax.errorbar(
            h, cols["estimate"], yerr=np.asarray(cols["se"]),
            marker="o", color="C1", label="sampled", **MARKERS,
        )
        ax.axhline(0.0, color="k", lw=0.6, zorder=1)
        title = f"H=({meta.get('h1', '?')}, {meta.get('h2', '?')}) {meta.get('variant', '')}"
        ax.set_title(title, fontsize=8)
        ax.set_xlabel("lag h")
    axes[0][0].set_ylabel(r"$\gamma^\Delta_{12}(h)$")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _build(argv):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="cov_*.csv exports")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    return build_figure(args.inputs), args.out


def main(argv=None) -> int:
    return run_main(_build, argv)


if __name__ == "__main__":
    raise SystemExit(main())
