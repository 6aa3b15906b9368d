# File: app/utils/file_utils.py
"""
Utility functions for output files: path resolution, fixed-precision number
formatting, CSV tables and whitespace-delimited plot point files.
"""
import math
import os
import tempfile
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Iterable, Sequence

import pandas as pd

from app.config import (
    DILATION_COLUMNS,
    DILATION_PRECISION,
    FORCE_COLUMNS,
    FORCE_PRECISION,
    OUTPUT_DIR,
    TRACE_COLUMNS,
)
from app.simulation.engine import ExperimentTrace
from app.simulation.experiments import DilationRow, ForceRow, SyncRow
from app.utils.logger import logger

POINT_PRECISION = 6


def resolve_output_path(path: Path) -> Path:
    """Relative paths land in OUTPUT_DIR when it is configured."""
    path = Path(path)
    if OUTPUT_DIR is not None and not path.is_absolute():
        return OUTPUT_DIR / path
    return path


def format_number(value: float, decimals: int) -> str:
    """Round half-up to `decimals`, then drop trailing zeros keeping one decimal."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    quantum = Decimal(1).scaleb(-decimals)
    rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP)
    if rounded == 0:
        rounded = abs(rounded)
    text = format(rounded, "f")
    if "." not in text:
        return text + ".0"
    text = text.rstrip("0")
    return text + "0" if text.endswith(".") else text


def dilation_frame(rows: Sequence[DilationRow]) -> pd.DataFrame:
    p = DILATION_PRECISION
    records = [
        [
            str(r.Tw),
            format_number(r.x, p["x"]),
            format_number(r.t, p["t"]),
            format_number(r.ta, p["ta"]),
            format_number(r.err_pct, p["err%"]),
            format_number(r.tp, p["tp"]),
        ]
        for r in rows
    ]
    return pd.DataFrame(records, columns=DILATION_COLUMNS, dtype=object)


def force_frame(rows: Sequence[ForceRow]) -> pd.DataFrame:
    p = FORCE_PRECISION
    records = [
        [
            str(r.Tw),
            format_number(r.p, p["p"]),
            format_number(r.v, p["v"]),
            format_number(r.va, p["va"]),
            format_number(r.v_err_pct, p["v_err%"]),
            format_number(r.E, p["E"]),
            format_number(r.Ea, p["Ea"]),
            format_number(r.E_err_pct, p["E_err%"]),
        ]
        for r in rows
    ]
    return pd.DataFrame(records, columns=FORCE_COLUMNS, dtype=object)


def trace_frame(trace: ExperimentTrace) -> pd.DataFrame:
    """One row per event; particle columns stay empty for lattice events."""
    records = []
    for event in trace.events:
        snap = event.particle
        records.append(
            [
                str(event.node_index),
                event.kind.value,
                "" if event.x is None else str(event.x),
                "" if snap is None else snap.pid,
                "" if snap is None else str(snap.position),
                "" if snap is None else str(snap.momentum),
                "" if snap is None else str(snap.jump_cursor),
                "" if snap is None else str(snap.proper_ticks),
            ]
        )
    return pd.DataFrame(records, columns=TRACE_COLUMNS, dtype=object)


def sync_frame(rows: Sequence[SyncRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.sigma, r.rho, r.marked) for r in rows],
        columns=["sigma", "rho", "marked"],
    )


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV text with '\\n' line endings and no index."""
    return frame.to_csv(index=False, lineterminator="\n")


def points_to_text(points: Iterable[Sequence[float]]) -> str:
    """One point per line, coordinates separated by a space."""
    return "".join(" ".join(format_number(v, POINT_PRECISION) for v in point) + "\n" for point in points)


def _stage(content: str | bytes, target: Path) -> Path:
    """Write content to a temporary file next to target."""
    target.parent.mkdir(parents=True, exist_ok=True)
    data = content if isinstance(content, bytes) else content.encode("utf-8")
    with tempfile.NamedTemporaryFile(dir=target.parent, prefix=f".{target.name}.", delete=False) as handle:
        try:
            handle.write(data)
        except OSError:
            handle.close()
            Path(handle.name).unlink(missing_ok=True)
            raise
    return Path(handle.name)


def write_outputs(outputs: dict[Path, str | bytes]) -> list[Path]:
    """
    Write a batch of prepared outputs.

    Every output is staged to a temporary file first; targets are only
    replaced once the whole batch is staged, so a failed write leaves
    them untouched.
    """
    staged: list[tuple[Path, Path, int]] = []
    try:
        for path, content in outputs.items():
            target = resolve_output_path(path)
            staged.append((_stage(content, target), target, len(content)))
    except OSError as e:
        logger.error(f"Error writing outputs: {e}", exc_info=True)
        for temp, _, _ in staged:
            temp.unlink(missing_ok=True)
        raise

    written: list[Path] = []
    for temp, target, size in staged:
        os.replace(temp, target)
        logger.info(f"Wrote {target} ({size} bytes)")
        written.append(target)
    return written
