"""Uniform cell-centered 2D grids, scalar fields on them, and error metrics.

The grid divides [xmin, xmax] x [ymin, ymax] into nx x ny cells and stores
field values at cell centers, x_i = xmin + (i + 0.5) dx.  Field arrays are
laid out (ny, nx): row index selects the y-cell, column index the x-cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Grid2D:
    """Geometry of a uniform cell-centered Cartesian grid."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    nx: int
    ny: int

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def ncells(self) -> int:
        return self.nx * self.ny

    def x_centers(self) -> np.ndarray:
        return self.xmin + (np.arange(self.nx) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.ymin + (np.arange(self.ny) + 0.5) * self.dy

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinate arrays X, Y of shape (ny, nx)."""
        return np.meshgrid(self.x_centers(), self.y_centers())


@dataclass
class ScalarField2D:
    """A scalar quantity sampled at the cell centers of a Grid2D.

    values has shape (ny, nx); values[j, i] belongs to the center of
    cell (i, j).
    """

    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.ny, self.grid.nx):
            raise ValueError(
                f"values shape {values.shape} does not match grid "
                f"({self.grid.ny}, {self.grid.nx})"
            )
        self.values = values

    def copy(self) -> "ScalarField2D":
        return ScalarField2D(self.grid, self.values.copy())


def make_grid(
    xmin: float, xmax: float, ymin: float, ymax: float, nx: int, ny: int
) -> Grid2D:
    """Build a uniform cell-centered grid over [xmin, xmax] x [ymin, ymax]."""
    if nx < 2 or ny < 2:
        raise ValueError(f"cell counts must be >= 2, got nx={nx}, ny={ny}")
    if not xmax > xmin:
        raise ValueError(f"xmax must exceed xmin, got [{xmin}, {xmax}]")
    if not ymax > ymin:
        raise ValueError(f"ymax must exceed ymin, got [{ymin}, {ymax}]")
    return Grid2D(float(xmin), float(xmax), float(ymin), float(ymax), int(nx), int(ny))


def sample(f: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: Grid2D) -> ScalarField2D:
    """Evaluate f at every cell center.

    f must accept numpy coordinate arrays and broadcast; non-finite values
    are rejected.
    """
    xx, yy = grid.meshgrid()
    values = np.broadcast_to(np.asarray(f(xx, yy), dtype=float), xx.shape).copy()
    if not np.isfinite(values).all():
        bad = np.argwhere(~np.isfinite(values))[0]
        raise ValueError(
            f"sampled function is not finite at cell (i={bad[1]}, j={bad[0]})"
        )
    return ScalarField2D(grid, values)


def rms_error(numeric: ScalarField2D, exact: ScalarField2D) -> float:
    """Root mean squared difference over all N = nx * ny cells."""
    if numeric.grid != exact.grid:
        raise ValueError("fields live on different grids")
    diff = numeric.values - exact.values
    return float(np.sqrt(np.mean(diff * diff)))


def order_of_accuracy(e_coarse: float, e_fine: float) -> float:
    """Observed order from errors at spacings 2*dx and dx."""
    if e_coarse <= 0.0 or e_fine <= 0.0:
        raise ValueError("errors must be positive to estimate an order")
    return float((np.log(e_coarse) - np.log(e_fine)) / np.log(2.0))


def bilinear_interpolate(field: ScalarField2D, x, y):
    """Bilinear interpolation of a field at (x, y) from the four nearest centers.

    Queries outside the cell-center hull are clamped to the outermost
    center rectangle, so every query returns a convex combination of
    stored values.  Accepts scalars or arrays.
    """
    grid = field.grid
    # fractional cell-center index: 0 at the first center, nx-1 at the last
    sx = np.clip((np.asarray(x, dtype=float) - grid.xmin) / grid.dx - 0.5, 0.0, grid.nx - 1.0)
    sy = np.clip((np.asarray(y, dtype=float) - grid.ymin) / grid.dy - 0.5, 0.0, grid.ny - 1.0)
    i0 = np.minimum(np.floor(sx).astype(int), grid.nx - 2)
    j0 = np.minimum(np.floor(sy).astype(int), grid.ny - 2)
    tx = sx - i0
    ty = sy - j0
    v = field.values
    out = (1.0 - ty) * ((1.0 - tx) * v[j0, i0] + tx * v[j0, i0 + 1]) + ty * (
        (1.0 - tx) * v[j0 + 1, i0] + tx * v[j0 + 1, i0 + 1]
    )
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(out)
    return out
