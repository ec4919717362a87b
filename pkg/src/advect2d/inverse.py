"""Recovery of an initial condition from a target state at time T.

The mismatch functional J(u0) = 1/2 * integral (u(., T) - target)^2 is
driven down by steepest descent.  Its gradient is obtained by one
forward transport solve and one backward (adjoint) solve per iteration:
the adjoint is seeded with the terminal mismatch u(., T) - target and
transported back to t = 0, where it equals the gradient field.

The forward and adjoint solves may use different schemes; the pair is
the "strategy" (e.g. LW forward with MMOC adjoint).  Both use the same
step size so the two halves of an iteration stay paired.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field

import numpy as np

from .grid import ScalarField2D, rms_error
from .solver import SolverConfig, _make_runner, backward_solve, forward_solve
from .velocity import VelocityField, negated


class DescentDiverged(RuntimeError):
    """The mismatch grew for several consecutive iterations."""


_DIVERGENCE_PATIENCE = 5


@dataclass
class InverseProblem:
    """Target state, dynamics, strategy pair and descent settings."""

    target: ScalarField2D
    T: float
    field: VelocityField
    forward_cfg: SolverConfig
    adjoint_cfg: SolverConfig
    eta: float = 0.5
    tol: float = 1e-4
    max_iter: int = 300

    def __post_init__(self) -> None:
        if self.eta <= 0.0:
            raise ValueError(f"step size must be positive, got {self.eta}")
        if self.tol <= 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass
class GDReport:
    """History and final state of one descent run.

    e_u0 / e_uT stay None until evaluate_design scores the run against
    known exact fields.
    """

    iterations: int
    j_history: list[float]
    rel_change_history: list[float]
    u0: ScalarField2D
    uT: ScalarField2D
    converged: bool
    wall_time: float
    e_u0: float | None = None
    e_uT: float | None = None
    j_final: float = field(init=False)

    def __post_init__(self) -> None:
        self.j_final = self.j_history[-1] if self.j_history else float("nan")


def _quadrature_weight(grid) -> float:
    return grid.dx * grid.dy


def cost(u0: ScalarField2D, prob: InverseProblem, threads: int = 1) -> float:
    """Terminal mismatch 1/2 * sum (u(T) - target)^2 dx dy."""
    if u0.grid != prob.target.grid:
        raise ValueError("initial condition and target live on different grids")
    uT = forward_solve(u0, prob.field, prob.T, prob.forward_cfg, threads)
    diff = uT.values - prob.target.values
    return float(0.5 * np.sum(diff * diff) * _quadrature_weight(u0.grid))


def gradient(u0: ScalarField2D, prob: InverseProblem, threads: int = 1) -> ScalarField2D:
    """Adjoint gradient: backward-transported terminal mismatch at t = 0."""
    if u0.grid != prob.target.grid:
        raise ValueError("initial condition and target live on different grids")
    uT = forward_solve(u0, prob.field, prob.T, prob.forward_cfg, threads)
    sigma_T = ScalarField2D(u0.grid, uT.values - prob.target.values)
    return backward_solve(sigma_T, prob.field, prob.T, prob.adjoint_cfg, threads)


def gd_solve(prob: InverseProblem, u0_init: ScalarField2D, threads: int = 1) -> GDReport:
    """Fixed-step descent from u0_init until the iterate stalls.

    Stops when the relative L2 change between consecutive iterates drops
    to tol, or flags the report when max_iter is exhausted first.  A run
    whose mismatch grows for 5 consecutive iterations raises
    DescentDiverged instead of looping to the cap.
    """
    if u0_init.grid != prob.target.grid:
        raise ValueError("initial guess and target live on different grids")
    grid = prob.target.grid
    weight = _quadrature_weight(grid)
    t0 = time.perf_counter()

    # the dynamics are fixed across iterations, so set both solves up once
    run_forward = _make_runner(grid, prob.field, prob.T, prob.forward_cfg)
    run_backward = _make_runner(grid, negated(prob.field), prob.T, prob.adjoint_cfg)
    identity = lambda values, pool=None: values.copy()
    run_forward = run_forward or identity
    run_backward = run_backward or identity

    u0 = u0_init.values.copy()
    j_history: list[float] = []
    rel_history: list[float] = []
    converged = False
    rising = 0

    pool_ctx = ThreadPoolExecutor(max_workers=threads) if threads > 1 else nullcontext()
    with pool_ctx as pool:
        for _ in range(prob.max_iter):
            uT = run_forward(u0, pool)
            mismatch = uT - prob.target.values
            j_now = float(0.5 * np.sum(mismatch * mismatch) * weight)
            if j_history and j_now > j_history[-1]:
                rising += 1
                if rising >= _DIVERGENCE_PATIENCE:
                    raise DescentDiverged(
                        f"mismatch rose for {rising} consecutive iterations "
                        f"(J={j_now:.6g} after {len(j_history) + 1} iterations); "
                        f"reduce the step size"
                    )
            else:
                rising = 0
            j_history.append(j_now)

            sigma0 = run_backward(mismatch, pool)
            u0_next = u0 - prob.eta * sigma0

            step_norm = float(np.linalg.norm(u0_next - u0))
            iterate_norm = float(np.linalg.norm(u0_next))
            rel = step_norm / iterate_norm if iterate_norm > 0.0 else (0.0 if step_norm == 0.0 else np.inf)
            rel_history.append(rel)
            u0 = u0_next
            if rel <= prob.tol:
                converged = True
                break

        final_uT = ScalarField2D(grid, run_forward(u0, pool).copy())

    final_u0 = ScalarField2D(grid, u0)
    wall = time.perf_counter() - t0
    return GDReport(
        iterations=len(j_history),
        j_history=j_history,
        rel_change_history=rel_history,
        u0=final_u0,
        uT=final_uT,
        converged=converged,
        wall_time=wall,
    )


def evaluate_design(
    report: GDReport, exact_u0: ScalarField2D, exact_uT: ScalarField2D
) -> tuple[float, float]:
    """RMS errors of the recovered initial condition and its transported state."""
    report.e_u0 = rms_error(report.u0, exact_u0)
    report.e_uT = rms_error(report.uT, exact_uT)
    return report.e_u0, report.e_uT
