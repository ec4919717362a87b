"""The three experiment families behind the benchmark CLI.

forward-error transports the known front and reports RMS error per
(scheme, spacing, horizon).  convergence runs an error ladder over
halved spacings and derives observed orders.  inverse-design synthesizes
the target from the closed-form solution, recovers the initial
condition per strategy pair, and scores the recovery.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .config import ExperimentConfig
from .grid import Grid2D, ScalarField2D, order_of_accuracy, rms_error, sample
from .inverse import GDReport, InverseProblem, evaluate_design, gd_solve
from .io import ResultRow, write_field, write_heatmap, write_table
from .solver import SchemeKind, SolverConfig, forward_solve
from .velocity import DoswellParams, doswell_exact, doswell_field

FORWARD_ERROR_COLUMNS = ("Scheme", "Dx", "T", "e_uT")
CONVERGENCE_COLUMNS = ("Scheme", "Dx", "e_uT", "p_uT")
INVERSE_COLUMNS = ("Strategy", "Iteration", "WallTime", "e_u0", "e_uT")

# how a strategy string maps onto (forward scheme, adjoint scheme)
STRATEGY_SCHEMES: dict[str, tuple[SchemeKind, SchemeKind]] = {
    "lw-lw": (SchemeKind.LW, SchemeKind.LW),
    "lw-mmoc": (SchemeKind.LW, SchemeKind.MMOC),
    "lw-lf": (SchemeKind.LW, SchemeKind.LF),
}


def _front_at(grid: Grid2D, t: float, params: DoswellParams) -> ScalarField2D:
    return sample(lambda x, y: doswell_exact(x, y, t, params), grid)


def _forward_rms(cfg: ExperimentConfig, grid: Grid2D, scheme: SchemeKind, T: float) -> float:
    params = DoswellParams(cfg.vbar, cfg.delta)
    vel = doswell_field(cfg.vbar)
    solver_cfg = SolverConfig(scheme, cfl=cfg.cfl)
    u0 = _front_at(grid, 0.0, params)
    uT = forward_solve(u0, vel, T, solver_cfg, cfg.threads)
    return rms_error(uT, _front_at(grid, T, params))


def run_forward_error(cfg: ExperimentConfig) -> list[ResultRow]:
    """RMS error of each requested (scheme, grid, horizon) forward run."""
    if cfg.kind != "forward-error":
        raise ValueError(f"config kind is {cfg.kind!r}, not forward-error")
    rows: list[ResultRow] = []
    for scheme in cfg.schemes:
        for grid in cfg.grids():
            for T in cfg.times:
                rows.append({
                    "Scheme": scheme.value,
                    "Dx": grid.dx,
                    "T": T,
                    "e_uT": _forward_rms(cfg, grid, scheme, T),
                })
    return rows


def run_convergence(
    cfg: ExperimentConfig,
    error_fn: Callable[[SchemeKind, Grid2D], float] | None = None,
) -> list[ResultRow]:
    """Error ladder over the halved spacings, with observed orders.

    error_fn exists as a seam for tests; the default runs the real
    forward solve against the closed-form solution.
    """
    if cfg.kind != "convergence":
        raise ValueError(f"config kind is {cfg.kind!r}, not convergence")
    if error_fn is None:
        error_fn = lambda scheme, grid: _forward_rms(cfg, grid, scheme, cfg.times[0])
    rows: list[ResultRow] = []
    for scheme in cfg.schemes:
        previous: float | None = None
        for grid in cfg.grids():
            e = error_fn(scheme, grid)
            p = "-" if previous is None else f"{order_of_accuracy(previous, e):.6g}"
            rows.append({"Scheme": scheme.value, "Dx": grid.dx, "e_uT": e, "p_uT": p})
            previous = e
    return rows


@dataclass
class InverseRun:
    """Rows plus the artifacts an inverse experiment leaves behind."""

    rows: list[ResultRow]
    fields: dict[str, ScalarField2D]
    reports: dict[str, GDReport] = field(default_factory=dict)

    @property
    def unconverged(self) -> list[str]:
        return [name for name, rep in self.reports.items() if not rep.converged]


def run_inverse(cfg: ExperimentConfig) -> InverseRun:
    """Recover the initial condition per strategy; score against the exact front.

    A run that exhausts max_iter is a result, not an error: its row is
    kept and the report is flagged unconverged.
    """
    if cfg.kind != "inverse-design":
        raise ValueError(f"config kind is {cfg.kind!r}, not inverse-design")
    params = DoswellParams(cfg.vbar, cfg.delta)
    grid = cfg.grids()[0]
    vel = doswell_field(cfg.vbar)
    T = cfg.times[0]
    target = _front_at(grid, T, params)
    exact_u0 = _front_at(grid, 0.0, params)
    u0_init = ScalarField2D(grid, np.zeros((grid.ny, grid.nx)))

    run = InverseRun(rows=[], fields={})
    for strategy in cfg.strategies:
        fwd_scheme, adj_scheme = STRATEGY_SCHEMES[strategy]
        prob = InverseProblem(
            target=target,
            T=T,
            field=vel,
            forward_cfg=SolverConfig(fwd_scheme, cfl=cfg.cfl),
            adjoint_cfg=SolverConfig(adj_scheme, cfl=cfg.cfl),
            eta=cfg.eta,
            tol=cfg.tol,
            max_iter=cfg.max_iter,
        )
        report = gd_solve(prob, u0_init, cfg.threads)
        e_u0, e_uT = evaluate_design(report, exact_u0, target)
        run.rows.append({
            "Strategy": strategy,
            "Iteration": report.iterations,
            "WallTime": report.wall_time,
            "e_u0": e_u0,
            "e_uT": e_uT,
        })
        run.fields[f"u0_{strategy}"] = report.u0
        run.fields[f"uT_{strategy}"] = report.uT
        run.reports[strategy] = report
    return run


def emit_outputs(
    rows: list[ResultRow],
    fields: dict[str, ScalarField2D],
    outdir: str | os.PathLike,
    table_name: str = "results",
    columns: tuple[str, ...] | None = None,
) -> list[Path]:
    """Write the results table, a dump and a heatmap per field; paths back."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    table = outdir / f"{table_name}.csv"
    write_table(rows, table, columns=columns)
    written.append(table)
    for name, f in fields.items():
        dump = outdir / f"{name}.dump"
        write_field(f, dump)
        written.append(dump)
        pgm = outdir / f"{name}.pgm"
        write_heatmap(f, pgm)
        written.append(pgm)
    return written
