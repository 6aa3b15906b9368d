"""
Shared fixtures for the srtsim test suite.
"""
import os

# no log files from test runs; must be set before app.config is imported
os.environ.setdefault("LOG_TO_FILE", "0")

from pathlib import Path

import pytest

from app.simulation.temporal_network import build_lattice
from app.simulation.units import UnitSystem

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def units() -> UnitSystem:
    return UnitSystem(v_t=10.0, v_l=10.0, v_m=1.0, c=1.0)


@pytest.fixture
def golden():
    def read(name: str) -> str:
        return (GOLDEN_DIR / name).read_text(encoding="utf-8")

    return read


@pytest.fixture
def lattice():
    return build_lattice(80)
