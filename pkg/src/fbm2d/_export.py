"""Deterministic table export (CSV with '#' metadata header, or JSON)."""

from __future__ import annotations

import json
from pathlib import Path

__all__ = ["format_float", "write_table"]


def format_float(x) -> str:
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def write_table(path, meta: dict, columns: list[str], rows, fmt: str = "csv") -> Path:
    """Write rows to ``path`` with a reproducible metadata header.

    CSV files open with '#'-prefixed metadata lines followed by the
    header row; complex-valued quantities must already be split into
    re/im columns by the caller. Identical inputs produce identical
    bytes (no timestamps).
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = [list(r) for r in rows]
    if fmt == "csv":
        lines = [f"# {k}={v}" for k, v in meta.items()]
        lines.append("# columns: " + ",".join(columns))
        lines.append(",".join(columns))
        for r in rows:
            lines.append(",".join(format_float(x) for x in r))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        doc = {
            "meta": {k: str(v) for k, v in meta.items()},
            "columns": columns,
            "rows": rows,
        }
        path.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path
