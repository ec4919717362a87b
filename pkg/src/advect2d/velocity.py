"""Time-independent velocity fields and the steady-vortex benchmark.

The benchmark flow is a circular vortex centered at the origin whose
tangential speed is vbar * sech^2(r) * tanh(r).  It winds an initially
straight tanh front into a spiral while admitting the closed-form
solution tanh((y cos(wt) - x sin(wt)) / delta), which makes it a strict
accuracy oracle for transport schemes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import Grid2D

# max of sech^2(r) * tanh(r) over r >= 0, attained at tanh(r) = 1/sqrt(3)
_PEAK_PROFILE = 2.0 / (3.0 * np.sqrt(3.0))

# cosh overflows near 710; clamping here keeps it finite while sech^2
# has already underflowed to exactly zero
_SECH_CUTOFF = 400.0


@dataclass(frozen=True)
class VelocityField:
    """A steady vector field with a known component-speed bound.

    evaluate maps coordinate arrays (x, y) to component arrays (vx, vy);
    max_component_speed bounds max(|vx|, |vy|) over the domain and feeds
    the time-step rule.
    """

    evaluate: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    max_component_speed: float


@dataclass(frozen=True)
class DoswellParams:
    """Vortex strength vbar and front smoothness delta."""

    vbar: float = 2.59807
    delta: float = 1.0

    def __post_init__(self) -> None:
        if self.vbar <= 0.0:
            raise ValueError(f"vbar must be positive, got {self.vbar}")
        if self.delta <= 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def _sech2(r: np.ndarray) -> np.ndarray:
    sech = 1.0 / np.cosh(np.minimum(r, _SECH_CUTOFF))
    return sech * sech


def tangential_speed(r, vbar: float):
    """Vortex tangential speed vbar * sech^2(r) * tanh(r)."""
    r = np.asarray(r, dtype=float)
    return vbar * _sech2(r) * np.tanh(r)


def angular_velocity(r, vbar: float):
    """Angular velocity w(r) = tangential_speed(r) / r.

    The r -> 0 singularity is removable: tanh(r)/r -> 1, so w(0) = vbar.
    """
    r = np.asarray(r, dtype=float)
    safe_r = np.where(r == 0.0, 1.0, r)
    w = np.where(r == 0.0, vbar, vbar * _sech2(r) * np.tanh(safe_r) / safe_r)
    if w.ndim == 0:
        return float(w)
    return w


def doswell_velocity(x, y, vbar: float):
    """Velocity (-y*w, x*w) of the steady circular vortex."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = angular_velocity(np.hypot(x, y), vbar)
    return -y * w, x * w


def doswell_exact(x, y, t: float, params: DoswellParams):
    """Closed-form solution: the tanh front rigidly rotated by angle w(r)*t."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = angular_velocity(np.hypot(x, y), params.vbar)
    angle = w * t
    return np.tanh((y * np.cos(angle) - x * np.sin(angle)) / params.delta)


def doswell_field(vbar: float = 2.59807) -> VelocityField:
    """The steady-vortex velocity field with its analytic speed bound."""
    return VelocityField(
        evaluate=lambda x, y: doswell_velocity(x, y, vbar),
        max_component_speed=vbar * _PEAK_PROFILE,
    )


def uniform_field(vx: float, vy: float) -> VelocityField:
    """Constant velocity everywhere; handy for exact-shift checks."""

    def evaluate(x, y):
        x = np.asarray(x, dtype=float)
        return np.full_like(x, vx), np.full_like(x, vy)

    return VelocityField(evaluate=evaluate, max_component_speed=max(abs(vx), abs(vy)))


def negated(field: VelocityField) -> VelocityField:
    """The reversed flow -v; same speed bound."""

    def evaluate(x, y):
        vx, vy = field.evaluate(x, y)
        return -vx, -vy

    return VelocityField(evaluate=evaluate, max_component_speed=field.max_component_speed)


def sample_components(field: VelocityField, grid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    """Velocity components at all cell centers, each shaped (ny, nx)."""
    xx, yy = grid.meshgrid()
    vx, vy = field.evaluate(xx, yy)
    vx = np.broadcast_to(np.asarray(vx, dtype=float), xx.shape).copy()
    vy = np.broadcast_to(np.asarray(vy, dtype=float), xx.shape).copy()
    return vx, vy
