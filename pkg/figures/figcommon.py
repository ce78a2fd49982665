"""Shared CSV loading and plot style for the figure scripts.

The scripts consume only the CSV tables exported by the fbm2d CLI
(`fbm2d figures-data`, or `fbm2d validate --export-figures`); they never
import the library itself. Style conventions: dashed lines for analytic
curves, dotted for asymptotes, bare markers for Monte Carlo estimates.
"""

from __future__ import annotations

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

ANALYTIC = dict(linestyle="--", linewidth=1.4, zorder=3)
ASYMPTOTE = dict(linestyle=":", linewidth=1.4, zorder=2)
MARKERS = dict(linestyle="none", markersize=4, markerfacecolor="none", zorder=4)

plt.rcParams.update(
    {
        "figure.dpi": 110,
        "savefig.dpi": 110,
        "font.size": 9,
        "axes.grid": True,
        "grid.alpha": 0.25,
    }
)


class FigureDataError(RuntimeError):
    pass


def load_table(path: str | Path) -> tuple[dict, dict]:
    """Read one exported CSV into (meta, columns-as-float-lists).

    Non-numeric columns (e.g. the jk or variant labels) stay as strings.
    """
    path = Path(path)
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[str]] = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        if not line.strip():
            continue
        if header is None:
            header = line.split(",")
            continue
        rows.append(line.split(","))
    if header is None:
        raise FigureDataError(f"{path}: no header row found")
    cols: dict[str, list] = {name: [] for name in header}
    for r in rows:
        for name, val in zip(header, r):
            try:
                cols[name].append(float(val))
            except ValueError:
                cols[name].append(val)
    return meta, cols


def require_columns(cols: dict, names: list[str], path) -> None:
    missing = [n for n in names if n not in cols]
    if missing:
        raise FigureDataError(f"{path}: missing columns {', '.join(missing)}")


def finish(fig, out: str | Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Software": "fbm2d-figures"})
    plt.close(fig)
    return out


def run_main(build, argv=None) -> int:
    """Standard wrapper: build(argv) -> (figure, out path), with errors
    reported as messages rather than tracebacks."""
    try:
        fig, out = build(argv)
        finish(fig, out)
        print(f"wrote {out}")
        return 0
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
