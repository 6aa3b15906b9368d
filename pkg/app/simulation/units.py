"""
Conversions between natural units (lab nodes, cells, mass units) and
standard units, and the relative velocity beta.

Natural quantities stay exact integers; only the standard-unit results
are floating point.
"""
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, PositiveFloat

from app.config import DEFAULT_C, DEFAULT_V_L, DEFAULT_V_M, DEFAULT_V_T


class UnitSystem(BaseModel):
    """Conversion coefficients v_t, v_l, v_m and the light speed c."""

    model_config = ConfigDict(frozen=True)

    v_t: PositiveFloat = DEFAULT_V_T  # lab nodes per unit length of light-time
    v_l: PositiveFloat = DEFAULT_V_L  # cells per unit length
    v_m: PositiveFloat = DEFAULT_V_M  # mass units per unit mass
    c: PositiveFloat = DEFAULT_C

    @property
    def node_per_cell(self) -> Fraction:
        """Exact ratio r = v_t / v_l."""
        return Fraction(repr(self.v_t)) / Fraction(repr(self.v_l))


def time_to_standard(tau: int, u: UnitSystem) -> float:
    """t = tau / (c * v_t)."""
    if tau < 0:
        raise ValueError(f"tau must be non-negative, got {tau}")
    return tau / (u.c * u.v_t)


def distance_to_standard(rho: int, u: UnitSystem) -> float:
    """d = rho / v_l."""
    return rho / u.v_l


def mass_to_standard(mu: int, u: UnitSystem) -> float:
    """m = mu / v_m."""
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    return mu / u.v_m


def relative_velocity(rho: int, t_w: int, tau_r: int, u: UnitSystem) -> float:
    """beta = rho (in node units) / (T_w * tau_R)."""
    if t_w < 1 or tau_r < 1:
        raise ValueError(f"T_w and tau_R must be >= 1, got T_w={t_w}, tau_R={tau_r}")
    return float(rho * u.node_per_cell / (t_w * tau_r))
