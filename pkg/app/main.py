# File: app/main.py
"""
Command-line entry point for srtsim.

srtsim runs a discrete spacetime of lab time nodes and space cells and
reproduces special-relativity experiments on it: time dilation at constant
momentum and motion under a constant force.

Exit codes: 0 success, 1 configuration error, 2 run-time error.
"""
import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from app.commands.handlers import (
    CommandOutput,
    handle_config,
    handle_constant_force,
    handle_convergence,
    handle_sync_table,
    handle_time_dilation,
    handle_trace,
)
from app.components.config_loader import ConfigError, config_from_options, load_config_file
from app.config import DEFAULT_C, DEFAULT_RESOLUTION, DEFAULT_V_L, DEFAULT_V_M, DEFAULT_V_T
from app.simulation.errors import SimulationError
from app.simulation.units import UnitSystem
from app.utils.file_utils import write_outputs
from app.utils.logger import logger

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

VERBOSITY_CHOICE = click.Choice(["quiet", "ticks", "cells", "nodes"])


def unit_options(command):
    """--v-t, --v-l, --v-m, --c on a subcommand."""
    command = click.option("--c", "c", type=float, default=DEFAULT_C, show_default=True, help="Light speed.")(command)
    command = click.option("--v-m", type=float, default=DEFAULT_V_M, show_default=True, help="Mass units per unit mass.")(command)
    command = click.option("--v-l", type=float, default=DEFAULT_V_L, show_default=True, help="Cells per unit length.")(command)
    command = click.option("--v-t", type=float, default=DEFAULT_V_T, show_default=True, help="Lab nodes per unit light-time.")(command)
    return command


def _finish(out: CommandOutput) -> None:
    """Write prepared files, then stdout."""
    write_outputs(out.files)
    if out.stdout:
        click.echo(out.stdout, nl=False)


@click.group()
def cli():
    """Discrete spacetime simulator."""


@cli.command("time-dilation")
@click.option("--beta", type=float, required=True, help="Displacement per bearing time (j = beta * tau_R).")
@click.option("--tau-r", type=int, default=DEFAULT_RESOLUTION, show_default=True, help="Lab nodes per tick.")
@click.option("--ticks", type=int, default=None, help="Number of ticks to run.")
@click.option("--cells", type=int, default=None, help="Lattice size (sized to the run when omitted).")
@unit_options
@click.option("--csv", type=click.Path(path_type=Path), default=None, help="Table output (stdout when omitted).")
@click.option("--worldline", type=click.Path(path_type=Path), default=None, help="World line points file (x t).")
@click.option("--trace", "trace_path", type=click.Path(path_type=Path), default=None, help="Event trace CSV.")
@click.option("--verbosity", type=VERBOSITY_CHOICE, default="ticks", show_default=True, help="Trace detail.")
@click.option("--report", type=click.Path(path_type=Path), default=None, help="Report file (.md or .pdf).")
@click.option("--allow-beta-above-one", is_flag=True, help="Run beta > 1 (particle time stops).")
def time_dilation(beta, tau_r, ticks, cells, v_t, v_l, v_m, c, csv, worldline, trace_path, verbosity, report, allow_beta_above_one):
    """Constant momentum: x, t, ta, err%, tp per tick."""
    config = config_from_options(
        experiment="time-dilation",
        allow_beta_above_one=allow_beta_above_one,
        beta=beta,
        tau_r=tau_r,
        ticks=ticks,
        cells=cells,
        v_t=v_t,
        v_l=v_l,
        v_m=v_m,
        c=c,
        csv=csv,
        worldline=worldline,
        trace=trace_path,
        verbosity=verbosity,
        report=report,
    )
    _finish(handle_time_dilation(config))


@cli.command("constant-force")
@click.option("--ti", type=int, required=True, help="Interaction acts per carrier.")
@click.option("--mu", type=int, default=1, show_default=True, help="Rest mass in mass units.")
@click.option("--tau-r", type=int, default=DEFAULT_RESOLUTION, show_default=True, help="Lab nodes per tick.")
@click.option("--ticks", type=int, default=None, help="Number of ticks to run.")
@click.option("--cells", type=int, default=None, help="Lattice size (sized to the run when omitted).")
@unit_options
@click.option("--csv", type=click.Path(path_type=Path), default=None, help="Table output (stdout when omitted).")
@click.option("--curve", type=click.Path(path_type=Path), default=None, help="Velocity curve points file (p v va).")
@click.option("--trace", "trace_path", type=click.Path(path_type=Path), default=None, help="Event trace CSV.")
@click.option("--verbosity", type=VERBOSITY_CHOICE, default="ticks", show_default=True, help="Trace detail.")
@click.option("--report", type=click.Path(path_type=Path), default=None, help="Report file (.md or .pdf).")
def constant_force(ti, mu, tau_r, ticks, cells, v_t, v_l, v_m, c, csv, curve, trace_path, verbosity, report):
    """Constant force from rest: p, v, va, E, Ea and errors per tick."""
    config = config_from_options(
        experiment="constant-force",
        ti=ti,
        mu=mu,
        tau_r=tau_r,
        ticks=ticks,
        cells=cells,
        v_t=v_t,
        v_l=v_l,
        v_m=v_m,
        c=c,
        csv=csv,
        curve=curve,
        trace=trace_path,
        verbosity=verbosity,
        report=report,
    )
    _finish(handle_constant_force(config))


@cli.command("sync-table")
@click.option("--sigma-max", type=int, required=True, help="Largest bearing node count sigma.")
@click.option("--rho-max", type=int, required=True, help="Largest cell distance rho.")
@unit_options
@click.option("--csv", type=click.Path(path_type=Path), default=None, help="Table output (stdout when omitted).")
def sync_table(sigma_max, rho_max, v_t, v_l, v_m, c, csv):
    """Marked lab node for every (sigma, rho)."""
    config = config_from_options(
        experiment="sync-table", sigma_max=sigma_max, rho_max=rho_max, v_t=v_t, v_l=v_l, v_m=v_m, c=c, csv=csv
    )
    _finish(handle_sync_table(config))


@cli.command("trace")
@click.option("--beta", type=float, required=True, help="Displacement per bearing time.")
@click.option("--tau-r", type=int, default=DEFAULT_RESOLUTION, show_default=True, help="Lab nodes per tick.")
@click.option("--ticks", type=int, default=1, show_default=True, help="Number of ticks to run.")
@click.option("--cells", type=int, default=None, help="Lattice size (sized to the run when omitted).")
@unit_options
@click.option("--verbosity", type=VERBOSITY_CHOICE, default="cells", show_default=True, help="Trace detail.")
@click.option("--out", type=click.Path(path_type=Path), default=None, help="Trace CSV (stdout when omitted).")
@click.option("--allow-beta-above-one", is_flag=True, help="Run beta > 1 (particle time stops).")
def trace(beta, tau_r, ticks, cells, v_t, v_l, v_m, c, verbosity, out, allow_beta_above_one):
    """Ordered event log of a constant-momentum run."""
    config = config_from_options(
        experiment="trace",
        allow_beta_above_one=allow_beta_above_one,
        beta=beta,
        tau_r=tau_r,
        ticks=ticks,
        cells=cells,
        v_t=v_t,
        v_l=v_l,
        v_m=v_m,
        c=c,
        verbosity=verbosity,
        trace=out,
    )
    _finish(handle_trace(config))


@cli.command("convergence")
@click.option("--beta", type=float, default=0.5, show_default=True, help="Displacement per bearing time.")
@click.option("--tau-r", "resolutions", type=int, multiple=True, default=(10, 20, 40), show_default=True,
              help="Resolutions to compare (repeatable).")
@click.option("--ticks", type=int, default=8, show_default=True, help="Number of ticks per run.")
@unit_options
@click.option("--csv", type=click.Path(path_type=Path), default=None, help="Table output (stdout when omitted).")
def convergence(beta, resolutions, ticks, v_t, v_l, v_m, c, csv):
    """Largest time-dilation error per resolution."""
    try:
        units = UnitSystem(v_t=v_t, v_l=v_l, v_m=v_m, c=c)
    except ValueError as e:
        raise ConfigError([(0, str(e))]) from e
    _finish(handle_convergence(beta, resolutions, ticks, units, csv))


@cli.command("run")
@click.argument("config_file", type=click.Path(path_type=Path))
def run_config(config_file):
    """Run the experiment a config file selects."""
    _finish(handle_config(load_config_file(config_file)))


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures to exit codes."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        cli.main(args=args, prog_name="srtsim", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("Aborted.", err=True)
        return EXIT_CONFIG
    except click.ClickException as e:
        e.show()
        return EXIT_CONFIG
    except ConfigError as e:
        logger.error(f"Configuration error: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return EXIT_CONFIG
    except SimulationError as e:
        logger.error(f"Simulation error: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return EXIT_RUNTIME
    except ValueError as e:
        # experiment arguments the config model cannot see, e.g. a fractional j
        logger.error(f"Invalid experiment arguments: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        click.echo(f"Error: {e}", err=True)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
