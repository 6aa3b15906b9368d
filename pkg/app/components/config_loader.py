# File: app/components/config_loader.py
"""
Run configuration intake: parses flat key=value text, validates it into a
RunConfig and reports every problem with the line it was found on.
Adds a size guard for config files read from disk.

Format: one or more `key=value` pairs per line separated by commas,
`#` starts a comment.
"""
from pathlib import Path
from typing import Literal, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    ValidationError,
    ValidationInfo,
    field_validator,
)

from app.config import (
    DEFAULT_C,
    DEFAULT_DILATION_TICKS,
    DEFAULT_FORCE_TICKS,
    DEFAULT_RESOLUTION,
    DEFAULT_REST_MASS,
    DEFAULT_V_L,
    DEFAULT_V_M,
    DEFAULT_V_T,
    MAX_CONFIG_BYTES,
)
from app.simulation.engine import Verbosity
from app.simulation.units import UnitSystem
from app.utils.logger import logger

# keys each experiment cannot run without
REQUIRED_KEYS = {
    "time-dilation": ("beta",),
    "trace": ("beta",),
    "constant-force": ("ti",),
    "sync-table": ("sigma_max", "rho_max"),
}


class ConfigError(ValueError):
    """Configuration problems, each as (line, message); line 0 means the file as a whole."""

    def __init__(self, problems: list[tuple[int, str]]):
        self.problems = problems
        super().__init__("; ".join(f"line {line}: {message}" for line, message in problems))


class RunConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: Literal["time-dilation", "constant-force", "sync-table", "trace"]
    allow_beta_above_one: bool = False
    tau_r: PositiveInt = DEFAULT_RESOLUTION
    beta: Optional[NonNegativeFloat] = None
    ti: Optional[NonNegativeInt] = None
    mu: PositiveInt = DEFAULT_REST_MASS
    ticks: Optional[PositiveInt] = None
    cells: Optional[PositiveInt] = None
    sigma_max: Optional[NonNegativeInt] = None
    rho_max: Optional[NonNegativeInt] = None
    v_t: PositiveFloat = DEFAULT_V_T
    v_l: PositiveFloat = DEFAULT_V_L
    v_m: PositiveFloat = DEFAULT_V_M
    c: PositiveFloat = DEFAULT_C
    csv: Optional[Path] = None
    worldline: Optional[Path] = None
    curve: Optional[Path] = None
    trace: Optional[Path] = None
    report: Optional[Path] = None
    verbosity: Literal["quiet", "ticks", "cells", "nodes"] = "ticks"

    @field_validator("beta")
    @classmethod
    def _check_beta(cls, beta: Optional[float], info: ValidationInfo) -> Optional[float]:
        # j > tau_R stops particle time; only on request
        if beta is not None and beta > 1 and not info.data.get("allow_beta_above_one", False):
            raise ValueError(f"beta={beta} exceeds 1 (j > tau_R); set allow_beta_above_one=true to run it")
        return beta

    @property
    def units(self) -> UnitSystem:
        return UnitSystem(v_t=self.v_t, v_l=self.v_l, v_m=self.v_m, c=self.c)

    @property
    def n_ticks(self) -> int:
        if self.ticks is not None:
            return self.ticks
        if self.experiment == "constant-force":
            return DEFAULT_FORCE_TICKS
        if self.experiment == "trace":
            return 1
        return DEFAULT_DILATION_TICKS

    @property
    def trace_verbosity(self) -> Verbosity:
        return Verbosity[self.verbosity.upper()]


def _split_pairs(text: str) -> tuple[dict[str, str], dict[str, int], list[tuple[int, str]]]:
    values, lines, problems = {}, {}, []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        for item in content.split(","):
            item = item.strip()
            if not item:
                continue
            if "=" not in item:
                problems.append((number, f"expected key=value, got {item!r}"))
                continue
            key, value = (part.strip() for part in item.split("=", 1))
            key = key.lower().replace("-", "_")
            if key not in RunConfig.model_fields:
                problems.append((number, f"unknown key {key!r}"))
            elif key in values:
                problems.append((number, f"duplicate key {key!r} (first set on line {lines[key]})"))
            elif not value:
                problems.append((number, f"empty value for {key!r}"))
            else:
                values[key] = value
                lines[key] = number
    return values, lines, problems


def _validate(values: dict, lines: dict[str, int]) -> RunConfig:
    try:
        return RunConfig(**values)
    except ValidationError as e:
        problems = []
        for error in e.errors():
            field = error["loc"][0] if error["loc"] else None
            label = f"{field}: " if field else ""
            problems.append((lines.get(field, 0), f"{label}{error['msg']}"))
        logger.error(f"Invalid configuration: {problems}")
        raise ConfigError(problems) from e


def config_from_options(**options) -> RunConfig:
    """Validate command-line options; unset (None) options take their defaults."""
    return _validate({key: value for key, value in options.items() if value is not None}, {})


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text."""
    values, lines, problems = _split_pairs(text)

    experiment = values.get("experiment")
    missing = [] if experiment else ["experiment"]
    missing += [key for key in REQUIRED_KEYS.get(experiment, ()) if key not in values]
    if missing:
        problems.append((0, f"missing required key(s): {', '.join(missing)}"))
    if problems:
        raise ConfigError(problems)

    config = _validate(values, lines)
    logger.info(f"Configuration parsed: experiment={config.experiment}, tau_R={config.tau_r}")
    return config


def load_config_file(path: Path) -> RunConfig:
    """Read a config file from disk, enforcing MAX_CONFIG_BYTES."""
    path = Path(path)
    try:
        size = path.stat().st_size
    except OSError as e:
        raise ConfigError([(0, f"cannot read config file {path}: {e}")]) from e
    if size > MAX_CONFIG_BYTES:
        error_msg = f"Config file too large: {size / 1024:.1f} KB. Maximum allowed: {MAX_CONFIG_BYTES / 1024:.1f} KB."
        logger.error(error_msg)
        raise ConfigError([(0, error_msg)])
    logger.info(f"Loading configuration from {path}")
    return parse_config(path.read_text(encoding="utf-8"))
