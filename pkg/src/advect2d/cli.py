"""Command-line experiment runner.

    advect2d run <config>       execute an experiment config
    advect2d validate <config>  check a config without running it
    advect2d presets            list the shipped benchmark presets

Results go to the directory named by the config `outdir` key, else the
ADVECT2D_OUTDIR environment variable, else ./results/<name>.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import (
    FLAGGED_STRATEGIES,
    OUTDIR_ENV_VAR,
    PRESET_NAMES,
    ConfigError,
    ExperimentConfig,
    load_config,
    preset_path,
)
from .experiments import (
    CONVERGENCE_COLUMNS,
    FORWARD_ERROR_COLUMNS,
    INVERSE_COLUMNS,
    emit_outputs,
    run_convergence,
    run_forward_error,
    run_inverse,
)
from .io import ResultRow


def _resolve_outdir(cfg: ExperimentConfig) -> Path:
    if cfg.outdir is not None:
        return cfg.outdir
    base = os.environ.get(OUTDIR_ENV_VAR)
    if base:
        return Path(base) / cfg.name
    return Path("results") / cfg.name


def _print_rows(rows: list[ResultRow]) -> None:
    if not rows:
        print("  (no rows)")
        return
    keys = list(rows[0].keys())
    print("  " + "  ".join(keys))
    for row in rows:
        print("  " + "  ".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row.values()))


def _cmd_run(cfg: ExperimentConfig) -> int:
    outdir = _resolve_outdir(cfg)
    fields = {}
    if cfg.kind == "forward-error":
        rows, columns = run_forward_error(cfg), FORWARD_ERROR_COLUMNS
    elif cfg.kind == "convergence":
        rows, columns = run_convergence(cfg), CONVERGENCE_COLUMNS
    else:
        for strategy in cfg.strategies:
            if strategy in FLAGGED_STRATEGIES:
                print(f"note: strategy {strategy} is usable but has no validated reference results")
        run = run_inverse(cfg)
        rows, columns, fields = run.rows, INVERSE_COLUMNS, run.fields
        for strategy in run.unconverged:
            print(f"note: {strategy} stopped at the max_iter cap ({cfg.max_iter}) without converging")
    written = emit_outputs(rows, fields, outdir, table_name=cfg.name, columns=columns)
    print(f"{cfg.name}: {cfg.kind} finished, {len(rows)} row(s)")
    _print_rows(rows)
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="advect2d",
        description="Transport benchmark runner: forward error tables, "
        "convergence ladders and initial-condition recovery.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="execute an experiment config")
    run_p.add_argument("config", help="path to a key=value config file")
    val_p = sub.add_parser("validate", help="check a config without running it")
    val_p.add_argument("config", help="path to a key=value config file")
    sub.add_parser("presets", help="list the shipped benchmark presets")
    args = parser.parse_args(argv)

    if args.command == "presets":
        for name in PRESET_NAMES:
            print(f"{name}\t{preset_path(name)}")
        return 0

    try:
        cfg = load_config(args.config)
    except FileNotFoundError:
        print(f"error: no such config: {args.config}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        print(f"OK: {args.config} is a valid {cfg.kind} config ({cfg.name})")
        return 0

    try:
        return _cmd_run(cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
