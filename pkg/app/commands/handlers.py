"""
Experiment handlers: run what a RunConfig selects and prepare every output
(stdout text and files) in memory. Nothing is written here, so a failing
run leaves the output paths untouched.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd

from app.components.config_loader import RunConfig
from app.simulation.engine import ExperimentTrace, Verbosity
from app.simulation.experiments import (
    constant_force_experiment,
    run_convergence,
    run_sync_table,
    time_dilation_experiment,
    vp_curve_points,
    worldline_points,
)
from app.simulation.units import UnitSystem
from app.utils.file_utils import (
    dilation_frame,
    force_frame,
    format_number,
    frame_to_csv,
    points_to_text,
    sync_frame,
    trace_frame,
)
from app.utils.logger import logger
from app.utils.pdf_utils import markdown_to_pdf_bytes
from app.utils.report_builder import build_experiment_report


@dataclass
class CommandOutput:
    stdout: str = ""
    files: dict[Path, str | bytes] = field(default_factory=dict)

    def emit(self, text: str, path: Optional[Path]) -> None:
        """Route text to a file, or to stdout when no path is given."""
        if path is None:
            self.stdout += text
        else:
            self.files[Path(path)] = text


def _unit_parameters(units: UnitSystem) -> dict:
    return {"v_t": units.v_t, "v_l": units.v_l, "v_m": units.v_m, "c": units.c}


def _add_report(
    out: CommandOutput,
    path: Optional[Path],
    title: str,
    parameters: dict,
    frame: pd.DataFrame,
    trace: Optional[ExperimentTrace] = None,
) -> None:
    if path is None:
        return
    markdown = build_experiment_report(title, parameters, frame, trace)
    if Path(path).suffix.lower() == ".pdf":
        out.files[Path(path)] = markdown_to_pdf_bytes(markdown, title=title)
    else:
        out.files[Path(path)] = markdown


def handle_time_dilation(config: RunConfig) -> CommandOutput:
    verbosity = config.trace_verbosity if config.trace else Verbosity.QUIET
    rows, trace = time_dilation_experiment(
        config.beta, config.tau_r, config.n_ticks, config.units, config.cells, verbosity
    )
    frame = dilation_frame(rows)

    out = CommandOutput()
    out.emit(frame_to_csv(frame), config.csv)
    if config.worldline:
        out.files[Path(config.worldline)] = points_to_text(worldline_points(trace))
    if config.trace:
        out.files[Path(config.trace)] = frame_to_csv(trace_frame(trace))
    parameters = {"beta": config.beta, "tau_R": config.tau_r, "ticks": config.n_ticks, **_unit_parameters(config.units)}
    _add_report(out, config.report, "Time dilation at constant momentum", parameters, frame, trace)
    logger.info(f"Time dilation finished: {len(rows)} rows")
    return out


def handle_constant_force(config: RunConfig) -> CommandOutput:
    verbosity = config.trace_verbosity if config.trace else Verbosity.QUIET
    rows, trace = constant_force_experiment(
        config.ti, config.mu, config.tau_r, config.n_ticks, config.units, config.cells, verbosity
    )
    frame = force_frame(rows)

    out = CommandOutput()
    out.emit(frame_to_csv(frame), config.csv)
    if config.curve:
        out.files[Path(config.curve)] = points_to_text(vp_curve_points(rows))
    if config.trace:
        out.files[Path(config.trace)] = frame_to_csv(trace_frame(trace))
    parameters = {
        "t_i": config.ti,
        "mu": config.mu,
        "tau_R": config.tau_r,
        "ticks": config.n_ticks,
        **_unit_parameters(config.units),
    }
    _add_report(out, config.report, "Motion under a constant force", parameters, frame, trace)
    logger.info(f"Constant force finished: {len(rows)} rows")
    return out


def handle_sync_table(config: RunConfig) -> CommandOutput:
    rows = run_sync_table(config.sigma_max, config.rho_max, config.units.node_per_cell)
    out = CommandOutput()
    out.emit(frame_to_csv(sync_frame(rows)), config.csv)
    logger.info(f"Sync table finished: {len(rows)} rows")
    return out


def handle_trace(config: RunConfig) -> CommandOutput:
    """Event log of a constant-momentum run."""
    _, trace = time_dilation_experiment(
        config.beta, config.tau_r, config.n_ticks, config.units, config.cells, config.trace_verbosity
    )
    out = CommandOutput()
    out.emit(frame_to_csv(trace_frame(trace)), config.trace or config.csv)
    logger.info(f"Trace finished: {len(trace.events)} events up to node {trace.final_node}")
    return out


def handle_convergence(
    beta: float,
    resolutions: Sequence[int],
    n_ticks: int,
    units: UnitSystem,
    csv: Optional[Path] = None,
) -> CommandOutput:
    rows = run_convergence(beta, resolutions, n_ticks, units)
    frame = pd.DataFrame(
        [(str(r.resolution), format_number(r.max_err_pct, 2), format_number(r.bound_pct, 2)) for r in rows],
        columns=["tau_R", "max_err%", "bound%"],
        dtype=object,
    )
    out = CommandOutput()
    out.emit(frame_to_csv(frame), csv)
    return out


HANDLERS = {
    "time-dilation": handle_time_dilation,
    "constant-force": handle_constant_force,
    "sync-table": handle_sync_table,
    "trace": handle_trace,
}


def handle_config(config: RunConfig) -> CommandOutput:
    """Dispatch on the experiment a config selects."""
    return HANDLERS[config.experiment](config)
