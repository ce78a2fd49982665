"""Spectral panels: estimated (cross-)spectra with analytic overlays.

Input: psd_increment_*.csv or psd_process_*.csv exports (one panel per
file, real part on log-log axes plus an imaginary-part panel when it is
not identically zero). Markers are Monte Carlo estimates; the dashed
line is the exact spectrum, the dotted line its asymptote, annotated
with the predicted power law.

Usage: python fig_psd.py --in psd_increment_*.csv --out fig9.png
"""

from __future__ import annotations

import argparse

import matplotlib.pyplot as plt
import numpy as np

from figcommon import ANALYTIC, ASYMPTOTE, MARKERS, load_table, require_columns, run_main

_COLS = ["f", "analytic_re", "analytic_im", "asymptote_re", "asymptote_im",
         "est_re", "est_im", "se_re", "se_im"]


def _slope_label(meta: dict) -> str:
    h1, h2 = float(meta.get("h1", 0.5)), float(meta.get("h2", 0.5))
    a = h1 + h2
    if meta.get("command", "").endswith("process") or "horizon_T" in meta:
        expo = -2.0 if a > 1 else -(a + 1.0)
    else:
        expo = 1.0 - a
    return rf"slope ${expo:+.2f}$"


def build_figure(csv_paths: list[str]):
    n = len(csv_paths)
    has_im = []
    tables = []
    for path in csv_paths:
        meta, cols = load_table(path)
        require_columns(cols, _COLS, path)
        tables.append((path, meta, {k: np.asarray(v) for k, v in cols.items()}))
        has_im.append(np.max(np.abs(tables[-1][2]["analytic_im"])) > 0)
    rows = 2 if any(has_im) else 1
    fig, axes = plt.subplots(rows, n, figsize=(3.0 * n, 2.9 * rows), squeeze=False)
    for i, (path, meta, c) in enumerate(tables):
        f = c["f"]
        ax = axes[0][i]
        ax.loglog(f, np.abs(c["analytic_re"]), color="C0", label="analytic", **ANALYTIC)
        ax.loglog(f, np.abs(c["asymptote_re"]), color="k", label="asymptote", **ASYMPTOTE)
        ax.loglog(f, np.abs(c["est_re"]), marker="o", color="C1", label="estimated",
                  **MARKERS)
        ax.set_title(
            f"H=({meta.get('h1', '?')}, {meta.get('h2', '?')}) {meta.get('variant', '')}",
            fontsize=8,
        )
        ax.text(0.05, 0.08, _slope_label(meta), transform=ax.transAxes, fontsize=7)
        ax.set_xlabel("f")
        if rows > 1:
            ax2 = axes[1][i]
            ax2.semilogx(f, c["analytic_im"], color="C0", **ANALYTIC)
            ax2.semilogx(f, c["est_im"], marker="o", color="C1", **MARKERS)
            ax2.axhline(0.0, color="k", lw=0.6)
            ax2.set_xlabel("f")
    axes[0][0].set_ylabel(r"$|\mathrm{Re}\,S_{12}|$")
    if rows > 1:
        axes[1][0].set_ylabel(r"$\mathrm{Im}\,S_{12}$")
    axes[0][0].legend(fontsize=7)
    fig.tight_layout()
    return fig


def _build(argv):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--in", dest="inputs", nargs="+", required=True,
                    help="psd_increment_*.csv / psd_process_*.csv exports")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)
    return build_figure(args.inputs), args.out


def main(argv=None) -> int:
    return run_main(_build, argv)


if __name__ == "__main__":
    raise SystemExit(main())
