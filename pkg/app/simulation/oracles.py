"""
Closed-form special-relativity values the simulation is checked against.

All functions accept scalars or numpy arrays.
"""
import numpy as np


def analytic_lab_time(t_w, beta, tick_len: float = 1.0):
    """Lab time elapsed while T_w proper ticks of length tick_len pass at velocity beta."""
    t_w = np.asarray(t_w, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if np.any(t_w < 0):
        raise ValueError("T_w must be non-negative")
    result = t_w * tick_len * np.sqrt(1.0 + beta**2)
    return float(result) if result.ndim == 0 else result


def analytic_energy(p):
    """E = sqrt(1 + p^2), p in m0*c units, E in m0*c^2 units."""
    p = np.asarray(p, dtype=float)
    result = np.sqrt(1.0 + p**2)
    return float(result) if result.ndim == 0 else result


def analytic_velocity(p):
    """v = p / E, in units of c."""
    p = np.asarray(p, dtype=float)
    result = p / np.sqrt(1.0 + p**2)
    return float(result) if result.ndim == 0 else result


def relative_error(measured, exact):
    """Relative error in percent, 100 * |measured - exact| / |exact|."""
    measured = np.asarray(measured, dtype=float)
    exact = np.asarray(exact, dtype=float)
    if np.any(exact == 0):
        raise ValueError("relative error is undefined for an exact value of 0")
    result = 100.0 * np.abs(measured - exact) / np.abs(exact)
    return float(result) if result.ndim == 0 else result
