"""CSV/JSON writers shared by the command-line tools.

CSV files start with ``#``-prefixed metadata lines, use 12 significant
digits and LF line endings.  JSON files are written with sorted keys so
identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = ["fmt", "write_csv", "write_json", "write_table", "read_csv"]


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".12g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def write_json(path: Path, payload: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8", newline="\n")
    return path


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence], meta: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(meta):
            fh.write(f"# {key}: {meta[key]}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(x) for x in row) + "\n")
    return path


def write_table(stem: Path, header: Sequence[str], rows, meta: Mapping, fmt_name: str = "csv") -> Path:
    """Write ``rows`` as ``stem.csv`` or as ``stem.json`` (``{"metadata", "columns", "rows"}``)."""
    stem = Path(stem)
    if fmt_name == "csv":
        return write_csv(stem.with_suffix(".csv"), header, rows, meta)
    if fmt_name == "json":
        data = [[float(x) if not isinstance(x, (int, np.integer)) else int(x) for x in r] for r in rows]
        return write_json(stem.with_suffix(".json"), {"metadata": dict(meta), "columns": list(header), "rows": data})
    raise ValueError(f"unknown format {fmt_name!r}")


def read_csv(path: Path) -> tuple[dict, list[str], np.ndarray]:
    """Read a file produced by :func:`write_csv` back into ``(meta, header, data)``."""
    meta = {}
    header = None
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(": ")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        elif line:
            rows.append([float(x) for x in line.split(",")])
    return meta, header, np.array(rows).reshape(len(rows), len(header))
