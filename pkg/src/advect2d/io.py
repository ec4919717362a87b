"""File formats the experiment runner emits.

Field dumps ("field-dump v1"): one header line `nx ny xmin xmax ymin
ymax`, then nx*ny whitespace-separated values in row-major order
(y-cell rows, x-cell columns).

Result tables: comma-separated values with a header row; floats carry 6
significant digits.

Heatmaps: binary PGM (P5 magic), field range mapped linearly onto
0..255, written with +y upward.
"""

from __future__ import annotations

import os
from typing import Sequence

import numpy as np

from .grid import ScalarField2D, make_grid

ResultRow = dict[str, object]


def write_field(field: ScalarField2D, path: str | os.PathLike) -> None:
    g = field.grid
    header = f"{g.nx} {g.ny} {g.xmin:.17g} {g.xmax:.17g} {g.ymin:.17g} {g.ymax:.17g}"
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in field.values:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def read_field(path: str | os.PathLike) -> ScalarField2D:
    with open(path) as fh:
        head = fh.readline().split()
        if len(head) != 6:
            raise ValueError(f"{path}: malformed field-dump header")
        nx, ny = int(head[0]), int(head[1])
        xmin, xmax, ymin, ymax = (float(v) for v in head[2:])
        values = np.loadtxt(fh).reshape(ny, nx)
    return ScalarField2D(make_grid(xmin, xmax, ymin, ymax, nx, ny), values)


def _format_cell(value: object) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def write_table(
    rows: Sequence[ResultRow],
    path: str | os.PathLike,
    columns: Sequence[str] | None = None,
) -> None:
    """Comma-separated table with a header row.

    Column order comes from `columns` when given, else from the first
    row; an empty row set with explicit columns yields a header-only
    file.
    """
    if columns is None:
        if not rows:
            raise ValueError("columns are required to write an empty table")
        columns = list(rows[0].keys())
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            if list(row.keys()) != list(columns):
                raise ValueError(f"row keys {list(row.keys())} differ from header {columns}")
            fh.write(",".join(_format_cell(row[k]) for k in columns) + "\n")


def write_heatmap(field: ScalarField2D, path: str | os.PathLike) -> None:
    """Grayscale P5 heatmap of a field; a constant field maps to mid-gray."""
    values = field.values
    lo, hi = float(values.min()), float(values.max())
    if hi > lo:
        scaled = np.rint((values - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        scaled = np.full(values.shape, 128, dtype=np.uint8)
    ny, nx = scaled.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(np.flipud(scaled).tobytes())
