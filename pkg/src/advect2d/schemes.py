"""One-dimensional advance kernels: Lax-Friedrichs, Lax-Wendroff, MMOC.

Each kernel updates one grid line for one time step given the velocity
component at every point of the line.  The public sweeps take lines
along the last axis and accept leading batch axes, so one call advances
a whole block of rows.  The underscore cores additionally run along
axis 0 and take precomputed Courant / interpolation-index arrays; the
2D solver leans on them to sweep columns in place and to hoist the
per-step setup out of its time loop.

Boundary handling for the stencil schemes is a policy knob: "freeze"
holds the two endpoint values for the step, "extrapolate" copies the
updated neighbor into them.  The MMOC needs no policy; out-of-range
predecessor points are clamped to the line ends.
"""

from __future__ import annotations

import numpy as np

BOUNDARY_POLICIES = ("freeze", "extrapolate")


def _slices3(axis):
    """Views (minus, center, plus) of the interior along axis 0 or -1."""
    if axis == 0:
        return np.s_[:-2], np.s_[1:-1], np.s_[2:]
    return np.s_[..., :-2], np.s_[..., 1:-1], np.s_[..., 2:]


def _check_line(values, velocity, axis):
    values = np.asarray(values, dtype=float)
    velocity = np.asarray(velocity, dtype=float)
    if values.shape[axis] < 3:
        raise ValueError(f"line needs at least 3 points, got {values.shape[axis]}")
    if velocity.shape != values.shape:
        raise ValueError(
            f"velocity shape {velocity.shape} does not match values {values.shape}"
        )
    return values, velocity


def _apply_boundary(out, values, boundary, axis):
    if axis == 0:
        first, last, second, penult = np.s_[0], np.s_[-1], np.s_[1], np.s_[-2]
    else:
        first, last = np.s_[..., 0], np.s_[..., -1]
        second, penult = np.s_[..., 1], np.s_[..., -2]
    if boundary == "freeze":
        out[first] = values[first]
        out[last] = values[last]
    elif boundary == "extrapolate":
        out[first] = out[second]
        out[last] = out[penult]
    else:
        raise ValueError(f"unknown boundary policy {boundary!r}")
    return out


def _lf_core(values, courant_interior, boundary, axis):
    sm, sc, sp = _slices3(axis)
    out = np.empty_like(values)
    out[sc] = 0.5 * (values[sp] + values[sm]) - 0.5 * courant_interior * (
        values[sp] - values[sm]
    )
    return _apply_boundary(out, values, boundary, axis)


def _lw_core(values, courant_interior, courant_sq_interior, boundary, axis):
    sm, sc, sp = _slices3(axis)
    out = np.empty_like(values)
    out[sc] = (
        values[sc]
        - 0.5 * courant_interior * (values[sp] - values[sm])
        + 0.5 * courant_sq_interior * (values[sp] - 2.0 * values[sc] + values[sm])
    )
    return _apply_boundary(out, values, boundary, axis)


def _mmoc_indices(velocity, dx, dt, axis):
    """Lower neighbor index and weight of each clamped predecessor point.

    These depend only on the velocity and step, not on the field, so a
    time loop computes them once and replays them every step.
    """
    n = velocity.shape[axis]
    coords = np.arange(n, dtype=float)
    if axis == 0 and velocity.ndim > 1:
        coords = coords.reshape((n,) + (1,) * (velocity.ndim - 1))
    s = coords - velocity * (dt / dx)
    np.clip(s, 0.0, n - 1.0, out=s)
    k = np.minimum(s.astype(int), n - 2)
    return k, s - k


def _mmoc_core(values, k, theta, axis):
    left = np.take_along_axis(values, k, axis=axis)
    right = np.take_along_axis(values, k + 1, axis=axis)
    return (1.0 - theta) * left + theta * right


def lf_sweep(values, velocity, dx: float, dt: float, boundary: str = "freeze") -> np.ndarray:
    """Lax-Friedrichs step: neighbor average minus centered transport term."""
    u, v = _check_line(values, velocity, -1)
    c = v[..., 1:-1] * (dt / dx)
    return _lf_core(u, c, boundary, -1)


def lw_sweep(values, velocity, dx: float, dt: float, boundary: str = "freeze") -> np.ndarray:
    """Lax-Wendroff step: centered transport plus second-order correction."""
    u, v = _check_line(values, velocity, -1)
    c = v[..., 1:-1] * (dt / dx)
    return _lw_core(u, c, c * c, boundary, -1)


def mmoc_sweep(values, velocity, dx: float, dt: float) -> np.ndarray:
    """Characteristics step: read the line at the predecessor x - v*dt.

    Each point traces back along its local velocity and takes the linear
    interpolant of the current line there, so outputs are always convex
    combinations of the input values.
    """
    u, v = _check_line(values, velocity, -1)
    k, theta = _mmoc_indices(v, dx, dt, -1)
    return _mmoc_core(u, k, theta, -1)
