"""Noise correlation vs process cross-correlation / asymmetry curves.

Input: the rho_curves.csv export. Two panels: (a) rho12 against rho for
each (H1, H2) pair (causal solid, well-balanced dash-dot), (b) eta12
against rho for the causal model. The black dashed identity line is the
guide to the eye.

Usage: python fig_rho_curves.py --in rho_curves.csv --out fig1.png
"""

from __future__ import annotations

import argparse

import matplotlib.pyplot as plt
import numpy as np

from figcommon import load_table, require_columns, run_main


def build_figure(csv_path: str):
    meta, cols = load_table(csv_path)
    require_columns(cols, ["h1", "h2", "variant", "rho", "rho12", "eta12"], csv_path)
    h1 = np.asarray(cols["h1"])
    h2 = np.asarray(cols["h2"])
    variant = np.asarray(cols["variant"])
    rho = np.asarray(cols["rho"])
    rho12 = np.asarray(cols["rho12"])
    eta12 = np.asarray(cols["eta12"])

    pairs = sorted(set(zip(h1, h2)))
    fig, (ax_r, ax_e) = plt.subplots(1, 2, figsize=(8.2, 3.4))
    colors = plt.cm.viridis(np.linspace(0.0, 0.85, len(pairs)))
    for (a, b), color in zip(pairs, colors):
        for var, style in (("causal", "-"), ("wb", "-.")):
            m = (h1 == a) & (h2 == b) & (variant == var)
            if not m.any():
                continue
            label = f"H=({a:g},{b:g})" + ("" if var == "causal" else " wb")
            ax_r.plot(rho[m], rho12[m], style, color=color, label=label, lw=1.3)
            if var == "causal":
                ax_e.plot(rho[m], eta12[m], style, color=color, lw=1.3)
    for ax, ylabel in ((ax_r, r"$\rho_{12}$"), (ax_e, r"$\eta_{12}$")):
        lim = ax.get_ylim()
        ax.plot([-1, 1], [-1, 1], "k--", lw=1.0, label="identity")
        ax.set_ylim(lim)
        ax.set_xlabel(r"noise correlation $\rho$")
        ax.set_ylabel(ylabel)
    ax_r.set_title("(a) cross-correlation")
    ax_e.set_title("(b) asymmetry (causal)")
    ax_r.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    return fig


def _build(argv):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inputs", required=True, help="rho_curves.csv")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    return build_figure(args.inputs), args.out


def main(argv=None) -> int:
    return run_main(_build, argv)


if __name__ == "__main__":
    raise SystemExit(main())
