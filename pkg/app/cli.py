"""Subcommand dispatch for the command-line tool."""

import argparse
import logging
import os
import sys

import numpy as np

from app.coefficients import delta_plain_matrix, delta_tilde_matrix, diffusion_from_delta
from app.config import ConfigError, parse_config
from app.maxwell_stefan import make_state, run, stable_dt
from app.models.common import ErrorResponse
from app.models.config import RunConfig
from app.moments import SAFETY, at_rest, epsilon_sweep, kinetic_stable_dt, run_kinetic
from app.oracle import oracle_report
from app.output import write_matrix_csv, write_snapshots, write_table_csv
from app.profiles import build_profiles

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4
EXIT_IO = 5

DEFAULT_OUT = {
    "coeffs": os.path.join("output", "diffusion.csv"),
    "oracle-check": os.path.join("output", "oracle_check.csv"),
    "ms-run": os.path.join("output", "ms_run"),
    "kinetic-run": os.path.join("output", "kinetic_run"),
    "sweep": os.path.join("output", "sweep.csv"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Raises instead of exiting so dispatch can emit the JSON error line."""

    def error(self, message):
        raise UsageError(message)


def _eps_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mslimit", description="Maxwell-Stefan coefficients and diffusion-limit runs.")
    p.add_argument("-v", "--verbose", action="store_true", help="Debug-level logging on stderr.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    commands = {
        "coeffs": "Write the binary diffusion coefficient matrix.",
        "oracle-check": "Compare closed-form coefficients with the quadrature oracle.",
        "ms-run": "Run the Maxwell-Stefan solver and write snapshots.",
        "kinetic-run": "Run the scaled moment system for one epsilon and write snapshots.",
        "sweep": "Measure convergence of the moment system as epsilon -> 0.",
    }
    parsers = {}
    for name, help_text in commands.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="JSON run configuration.")
        cmd.add_argument("--out", default=DEFAULT_OUT[name], help="Output file (or directory for runs).")
        parsers[name] = cmd
    parsers["kinetic-run"].add_argument("--eps", type=float, required=True, help="Knudsen-type scaling epsilon.")
    parsers["sweep"].add_argument("--eps", type=_eps_list, default=None, help="e.g. 0.2,0.1,0.05")
    return p


# ---------------------------------------------------------------------------
# Pipelines
# ---------------------------------------------------------------------------

def _coefficient_data(cfg: RunConfig):
    delta = delta_tilde_matrix(cfg.mixture, cfg.kernel, cfg.angular, cfg.coefficients.max_composition_order)
    return delta, diffusion_from_delta(delta, cfg.mixture.total_concentration)


def cmd_coeffs(cfg: RunConfig, args) -> None:
    _, D = _coefficient_data(cfg)
    meta = {**cfg.metadata(), "quantity": "binary diffusion coefficients D_ij"}
    write_matrix_csv(D, meta, args.out, labels=cfg.mixture.names)


def cmd_oracle_check(cfg: RunConfig, args) -> None:
    df = oracle_report(
        cfg.mixture, cfg.kernel, cfg.angular, cfg.oracle, cfg.coefficients.max_composition_order
    )
    meta = {
        **cfg.metadata(),
        "theta_nodes_per_axis": str(cfg.oracle.theta_nodes_per_axis),
        "richardson_eps": ",".join(f"{e:.17g}" for e in cfg.oracle.richardson_eps),
    }
    write_table_csv(df, meta, args.out)


def cmd_ms_run(cfg: RunConfig, args) -> None:
    spec, grid = cfg.mixture, cfg.solver.grid
    _, D = _coefficient_data(cfg)
    c0 = build_profiles(cfg.solver.profiles, grid, spec)
    dt = cfg.solver.dt if cfg.solver.dt is not None else SAFETY * stable_dt(grid, D)
    initial = make_state(c0, grid, D, spec.total_concentration)
    trajectory = run(initial, grid, D, cfg.solver.t_end, dt, cfg.solver.output_every, spec.total_concentration)
    meta = {**cfg.metadata(), "n_cells": str(grid.n_cells), "boundary": grid.boundary}
    write_snapshots(trajectory, grid, spec, args.out, meta)


def cmd_kinetic_run(cfg: RunConfig, args) -> None:
    spec, grid = cfg.mixture, cfg.solver.grid
    delta, D = _coefficient_data(cfg)
    Delta = delta_plain_matrix(delta, spec)
    initial = at_rest(build_profiles(cfg.solver.profiles, grid, spec), args.eps)
    dt = SAFETY * kinetic_stable_dt(initial, grid, D, spec.masses, spec.kT)
    if cfg.solver.dt is not None:
        dt = min(dt, cfg.solver.dt)
    trajectory = run_kinetic(
        initial, grid, spec.masses, spec.kT, Delta, cfg.solver.t_end, dt, cfg.solver.output_every
    )
    meta = {
        **cfg.metadata(),
        "eps": f"{args.eps:.17g}",
        "n_cells": str(grid.n_cells),
        "boundary": grid.boundary,
    }
    write_snapshots(trajectory, grid, spec, args.out, meta)


def cmd_sweep(cfg: RunConfig, args) -> None:
    df = epsilon_sweep(cfg, args.eps)
    meta = {
        **cfg.metadata(),
        "n_cells": str(cfg.solver.grid.n_cells),
        "reference_refinement": str(cfg.sweep.reference_refinement),
        "t_end": f"{cfg.solver.t_end:.17g}",
    }
    write_table_csv(df, meta, args.out)


COMMANDS = {
    "coeffs": cmd_coeffs,
    "oracle-check": cmd_oracle_check,
    "ms-run": cmd_ms_run,
    "kinetic-run": cmd_kinetic_run,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------------------
# Entry
# ---------------------------------------------------------------------------

def _fail(kind: str, message: str, status: int) -> int:
    logger.error("%s error: %s", kind, message)
    print(ErrorResponse(error=message, kind=kind).model_dump_json(), file=sys.stderr)
    return status


def dispatch(argv) -> int:
    """Run one subcommand; returns the process exit status."""
    try:
        args = build_parser().parse_args(list(argv))
    except UsageError as e:
        return _fail("usage", str(e), EXIT_USAGE)

    try:
        cfg = parse_config(args.config)
        if args.cmd == "kinetic-run" and not 0 < args.eps < 1:
            return _fail("usage", f"--eps must lie in (0, 1) (got {args.eps})", EXIT_USAGE)
        if args.cmd == "sweep" and args.eps is not None and not all(0 <= e < 1 for e in args.eps):
            return _fail("usage", f"--eps values must lie in [0, 1) (got {args.eps})", EXIT_USAGE)
        logger.info("%s: config %s", args.cmd, args.config)
        COMMANDS[args.cmd](cfg, args)
    except ConfigError as e:
        return _fail("config", str(e), EXIT_CONFIG)
    except (np.linalg.LinAlgError, OverflowError, ValueError, ArithmeticError) as e:
        return _fail("numerical", str(e), EXIT_NUMERICAL)
    except OSError as e:
        return _fail("io", str(e), EXIT_IO)
    logger.info("%s: wrote %s", args.cmd, args.out)
    return EXIT_OK
