"""Time integration of 2D transport, forward and backward, by splitting.

One step applies an x-direction sweep to every row and then a
y-direction sweep to every column (Godunov splitting), both with the
full time step.  The backward (adjoint) problem is run through the same
machinery with the velocity negated: substituting s = T - t turns it
into a forward transport in s.

The velocity is steady, so everything a step needs beyond the field
itself (Courant arrays, characteristic interpolation indices) is
computed once per solve and replayed every step.  Row sweeps within a
phase are independent: a thread pool may chunk them, and the result is
identical for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import Grid2D, ScalarField2D
from .schemes import (
    BOUNDARY_POLICIES,
    _lf_core,
    _lw_core,
    _mmoc_core,
    _mmoc_indices,
    _slices3,
)
from .velocity import VelocityField, negated, sample_components

_CFL_SLACK = 1.0 + 1e-9


class SchemeKind(str, Enum):
    LF = "lf"
    LW = "lw"
    MMOC = "mmoc"


class CFLViolation(ValueError):
    """A step was attempted with |v| dt / dx above 1 somewhere."""


@dataclass(frozen=True)
class SolverConfig:
    """Scheme choice plus the knobs that fix a splitting run.

    cfl sets dt through the step rule; boundary picks the stencil
    endpoint policy; sweep_order exists for splitting sensitivity
    studies and defaults to x before y.
    """

    scheme: SchemeKind
    cfl: float = 0.5
    boundary: str = "freeze"
    sweep_order: str = "xy"

    def __post_init__(self) -> None:
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must be in (0, 1], got {self.cfl}")
        if self.boundary not in BOUNDARY_POLICIES:
            raise ValueError(f"unknown boundary policy {self.boundary!r}")
        if self.sweep_order not in ("xy", "yx"):
            raise ValueError(f"sweep_order must be 'xy' or 'yx', got {self.sweep_order!r}")


def cfl_timestep(grid: Grid2D, field: VelocityField, cfl: float) -> float:
    """Step size cfl * dx / max component speed (equal spacings assumed)."""
    if not np.isclose(grid.dx, grid.dy):
        raise ValueError(f"step rule assumes dx == dy, got {grid.dx} != {grid.dy}")
    if field.max_component_speed <= 0.0:
        raise ValueError("velocity bound is zero; a static field needs no stepping")
    return cfl * grid.dx / field.max_component_speed


class _Phase:
    """One directional sweep with its per-step arrays precomputed."""

    def __init__(self, cfg: SolverConfig, velocity: np.ndarray, spacing: float,
                 dt: float, axis: int):
        self.cfg = cfg
        self.axis = axis
        self.batch_axis = 0 if axis != 0 else 1
        if cfg.scheme is SchemeKind.MMOC:
            k, theta = _mmoc_indices(velocity, spacing, dt, axis)
            self.payload = (k, theta)
        else:
            c = velocity[_slices3(axis)[1]] * (dt / spacing)
            self.payload = (c,) if cfg.scheme is SchemeKind.LF else (c, c * c)

    def _apply(self, u: np.ndarray, payload) -> np.ndarray:
        if self.cfg.scheme is SchemeKind.MMOC:
            return _mmoc_core(u, payload[0], payload[1], self.axis)
        if self.cfg.scheme is SchemeKind.LF:
            return _lf_core(u, payload[0], self.cfg.boundary, self.axis)
        return _lw_core(u, payload[0], payload[1], self.cfg.boundary, self.axis)

    def _sliced(self, arrays, lo: int, hi: int):
        if self.batch_axis == 0:
            return tuple(a[lo:hi] for a in arrays)
        return tuple(a[:, lo:hi] for a in arrays)

    def run(self, u: np.ndarray, pool: ThreadPoolExecutor | None) -> np.ndarray:
        if pool is None:
            return self._apply(u, self.payload)
        size = u.shape[self.batch_axis]
        bounds = np.linspace(0, size, min(pool._max_workers, size) + 1, dtype=int)
        parts = pool.map(
            lambda span: self._apply(
                self._sliced((u,), *span)[0], self._sliced(self.payload, *span)
            ),
            zip(bounds[:-1], bounds[1:]),
        )
        return np.concatenate(list(parts), axis=self.batch_axis)


class _Stepper:
    """A full split step of fixed dt: the ordered pair of phases."""

    def __init__(self, grid: Grid2D, vx: np.ndarray, vy: np.ndarray,
                 cfg: SolverConfig, dt: float):
        x_phase = _Phase(cfg, vx, grid.dx, dt, axis=-1)
        y_phase = _Phase(cfg, vy, grid.dy, dt, axis=0)
        self.phases = (x_phase, y_phase) if cfg.sweep_order == "xy" else (y_phase, x_phase)

    def step(self, u: np.ndarray, pool: ThreadPoolExecutor | None = None) -> np.ndarray:
        for phase in self.phases:
            u = phase.run(u, pool)
        return u


def _check_cfl(vx, vy, grid: Grid2D, dt: float) -> None:
    courant = max(
        np.abs(vx).max() * dt / grid.dx, np.abs(vy).max() * dt / grid.dy
    )
    if courant > _CFL_SLACK:
        raise CFLViolation(f"step dt={dt} gives Courant number {courant:.4f} > 1")


def _split_horizon(T: float, dt: float) -> tuple[int, float]:
    n_full = int(np.floor(T / dt))
    remainder = T - n_full * dt
    if remainder <= dt * 1e-12:
        remainder = 0.0
    return n_full, remainder


def _make_runner(grid: Grid2D, field: VelocityField, T: float, cfg: SolverConfig):
    """Callable advancing raw values over [0, T], or None when T needs no steps.

    Build it once and call it many times: all per-step setup is hoisted
    here.  The final step is shortened to land exactly on T.
    """
    if T < 0.0:
        raise ValueError(f"horizon must be nonnegative, got {T}")
    if T == 0.0 or field.max_component_speed <= 0.0:
        return None
    dt = cfl_timestep(grid, field, cfg.cfl)
    n_full, remainder = _split_horizon(T, dt)
    vx, vy = sample_components(field, grid)
    _check_cfl(vx, vy, grid, dt)
    schedule = []
    if n_full:
        schedule.append((_Stepper(grid, vx, vy, cfg, dt), n_full))
    if remainder > 0.0:
        schedule.append((_Stepper(grid, vx, vy, cfg, remainder), 1))

    def run(values: np.ndarray, pool: ThreadPoolExecutor | None = None) -> np.ndarray:
        if not schedule:
            return values.copy()
        for stepper, count in schedule:
            for _ in range(count):
                values = stepper.step(values, pool)
        return values

    return run


def advance(
    u: ScalarField2D, field: VelocityField, dt: float, cfg: SolverConfig, threads: int = 1
) -> ScalarField2D:
    """One split transport step of size dt."""
    grid = u.grid
    vx, vy = sample_components(field, grid)
    _check_cfl(vx, vy, grid, dt)
    stepper = _Stepper(grid, vx, vy, cfg, dt)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = stepper.step(u.values, pool)
    else:
        out = stepper.step(u.values)
    return ScalarField2D(grid, out)


def _solve(u0: ScalarField2D, field, T, cfg, threads) -> ScalarField2D:
    run = _make_runner(u0.grid, field, T, cfg)
    if run is None:
        # zero horizon or a static field: transport is the identity
        return u0.copy()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return ScalarField2D(u0.grid, run(u0.values, pool))
    return ScalarField2D(u0.grid, run(u0.values))


def forward_solve(
    u0: ScalarField2D, field: VelocityField, T: float, cfg: SolverConfig, threads: int = 1
) -> ScalarField2D:
    """Integrate the transport equation from u0 to time T."""
    return _solve(u0, field, T, cfg, threads)


def backward_solve(
    sigma_T: ScalarField2D, field: VelocityField, T: float, cfg: SolverConfig, threads: int = 1
) -> ScalarField2D:
    """Integrate the adjoint equation from terminal data at T back to 0."""
    return _solve(sigma_T, negated(field), T, cfg, threads)
