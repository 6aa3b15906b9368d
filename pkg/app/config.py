"""
Configuration management for the spacetime simulator.
Centralized settings and defaults.
"""
import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base paths
BASE_DIR = Path(__file__).parent.parent

# Output directory for CSV, plot point files and reports; relative output
# paths given on the command line are resolved against it when set.
OUTPUT_DIR: Optional[Path] = Path(os.environ["SRTSIM_OUTPUT_DIR"]) if os.getenv("SRTSIM_OUTPUT_DIR") else None

# Config file limits
MAX_CONFIG_BYTES = int(os.getenv("MAX_CONFIG_BYTES", 64 * 1024))  # 64 KB

# Network defaults (natural units)
DEFAULT_RESOLUTION = int(os.getenv("DEFAULT_RESOLUTION", 10))  # lab nodes per tick (tau_R)

# Unit system defaults: 1 tick = 1 metre of light-time, 1 cell = 0.1 m
DEFAULT_V_T = float(os.getenv("DEFAULT_V_T", 10.0))
DEFAULT_V_L = float(os.getenv("DEFAULT_V_L", 10.0))
DEFAULT_V_M = float(os.getenv("DEFAULT_V_M", 1.0))
DEFAULT_C = float(os.getenv("DEFAULT_C", 1.0))

# Experiment defaults (row counts of the two reference tables)
DEFAULT_DILATION_TICKS = int(os.getenv("DEFAULT_DILATION_TICKS", 7))
DEFAULT_FORCE_TICKS = int(os.getenv("DEFAULT_FORCE_TICKS", 8))
DEFAULT_DILATION_CELLS = int(os.getenv("DEFAULT_DILATION_CELLS", 80))
DEFAULT_FORCE_CELLS = int(os.getenv("DEFAULT_FORCE_CELLS", 200))
DEFAULT_REST_MASS = int(os.getenv("DEFAULT_REST_MASS", 1))  # mass units

# Sync table limits
MAX_SYNC_TABLE_ROWS = int(os.getenv("MAX_SYNC_TABLE_ROWS", 5_000_000))

# Table schemas (CSV headers)
DILATION_COLUMNS = ["Tw", "x", "t", "ta", "err%", "tp"]
FORCE_COLUMNS = ["Tw", "p", "v", "va", "v_err%", "E", "Ea", "E_err%"]
TRACE_COLUMNS = ["node", "kind", "x", "particle", "position", "momentum", "jump_cursor", "proper_ticks"]

# Printed precision per column (decimals)
DILATION_PRECISION = {"x": 1, "t": 1, "ta": 2, "err%": 2, "tp": 1}
FORCE_PRECISION = {"p": 2, "v": 2, "va": 2, "v_err%": 2, "E": 2, "Ea": 2, "E_err%": 2}

# Logging configuration
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
LOG_DIR = Path(os.getenv("LOG_DIR", BASE_DIR / "logs"))
LOG_TO_FILE = os.getenv("LOG_TO_FILE", "1").lower() not in ("0", "false", "no")
