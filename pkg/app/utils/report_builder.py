"""
Report builder that turns an experiment run into a Markdown document.

Sections:
- Parameters (natural and standard units)
- Result table at printed precision
- Error summary and run statistics
"""
from datetime import datetime
from typing import Optional

import pandas as pd

from app.simulation.engine import ExperimentTrace
from app.utils.logger import logger


def summarize_parameters(parameters: dict) -> str:
    lines = []
    for key, value in parameters.items():
        lines.append(f"- **{key}:** {value}")
    return "\n".join(lines) if lines else "(no parameters)"


def summarize_errors(frame: pd.DataFrame) -> str:
    """Largest value of every error column, as printed."""
    columns = [c for c in frame.columns if c.endswith("err%")]
    if not columns or frame.empty:
        return "(no error columns)"
    lines = []
    for column in columns:
        values = pd.to_numeric(frame[column], errors="coerce")
        worst = values.max()
        row = frame.loc[values.idxmax(), "Tw"] if pd.notna(worst) else "-"
        lines.append(f"- **max {column}:** {worst} (Tw={row})")
    return "\n".join(lines)


def summarize_trace(trace: Optional[ExperimentTrace]) -> str:
    if trace is None:
        return "(no trace)"
    lines = [f"- **final lab node:** {trace.final_node}"]
    for pid in sorted(trace.realized_carriers):
        lines.append(
            f"- **{pid}:** {trace.realized_carriers[pid]} carrier(s) realized, "
            f"{trace.dropped_carriers.get(pid, 0)} dropped"
        )
    return "\n".join(lines)


def frame_to_markdown(frame: pd.DataFrame) -> str:
    """Pipe table of the formatted frame."""
    header = "| " + " | ".join(frame.columns) + " |"
    rule = "|" + "|".join("---" for _ in frame.columns) + "|"
    body = ["| " + " | ".join(str(v) for v in row) + " |" for row in frame.itertuples(index=False)]
    return "\n".join([header, rule, *body])


def build_experiment_report(
    title: str,
    parameters: dict,
    frame: pd.DataFrame,
    trace: Optional[ExperimentTrace] = None,
    generated_at: Optional[datetime] = None,
) -> str:
    """Generate a markdown report for one experiment run."""
    generated_at = generated_at or datetime.now()

    report = []
    report.append(f"# {title}")
    report.append(f"\n*Generated on {generated_at.strftime('%Y-%m-%d %H:%M:%S')}*\n")

    report.append("## Parameters")
    report.append(summarize_parameters(parameters))

    report.append("\n## Results")
    report.append(frame_to_markdown(frame))

    report.append("\n## Error Summary")
    report.append(summarize_errors(frame))

    report.append("\n## Run")
    report.append(summarize_trace(trace))

    report.append("\n---\n*This report was generated by srtsim.*")
    logger.debug(f"Built report '{title}' with {len(frame)} rows")
    return "\n".join(report) + "\n"
