"""
Scripted experiments on the spacetime: time dilation at constant momentum,
motion under a constant force, convergence over resolutions, a randomized
speed-cap sweep and the synchronization table.

Rows keep full precision; rounding happens when they are written out.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from tqdm import tqdm

from app.config import DEFAULT_DILATION_CELLS, DEFAULT_FORCE_CELLS, MAX_SYNC_TABLE_ROWS
from app.simulation.engine import ExperimentTrace, Verbosity, build_spacetime, run
from app.simulation.oracles import analytic_energy, analytic_lab_time, analytic_velocity, relative_error
from app.simulation.particle_dynamics import Carrier, Particle
from app.simulation.sync import marked_index
from app.simulation.units import UnitSystem
from app.utils.logger import logger

PARTICLE_ID = "p0"


@dataclass(frozen=True)
class DilationRow:
    Tw: int
    x: float
    t: float
    ta: float
    err_pct: float
    tp: float


@dataclass(frozen=True)
class ForceRow:
    Tw: int
    p: float
    v: float
    va: float
    v_err_pct: float
    E: float
    Ea: float
    E_err_pct: float


@dataclass(frozen=True)
class ConvergenceRow:
    resolution: int
    max_err_pct: float
    bound_pct: float  # one node over the first-tick node count


@dataclass(frozen=True)
class SyncRow:
    sigma: int
    rho: int
    marked: int


@dataclass
class SpeedSweepResult:
    cases: int = 0
    max_step_ratio: float = 0.0  # largest displacement per tick over tau_R
    max_velocity: float = 0.0  # over outward ticks
    inward_ticks: int = 0
    max_inward_velocity: float = 0.0
    violations: list[str] = field(default_factory=list)


def _error_pct(measured: float, exact: float) -> float:
    if exact == 0:
        return 0.0 if measured == 0 else math.inf
    return relative_error(measured, exact)


def momentum_for_beta(beta: float, resolution: int, units: UnitSystem) -> int:
    """Jump register j carrying the particle beta * tau_R node units per tick."""
    if beta < 0:
        raise ValueError(f"beta must be non-negative, got {beta}")
    j = Fraction(str(beta)) * resolution / units.node_per_cell
    if j.denominator != 1:
        raise ValueError(
            f"beta * tau_R must be a whole number of cells per tick, got beta={beta}, tau_R={resolution} (j={j})"
        )
    return int(j)


def time_dilation_experiment(
    beta: float,
    resolution: int,
    n_ticks: int,
    units: Optional[UnitSystem] = None,
    n_cells: Optional[int] = None,
    verbosity: Verbosity = Verbosity.QUIET,
) -> tuple[list[DilationRow], ExperimentTrace]:
    """Constant momentum, no carriers: rows of the dilation table plus the run trace."""
    if n_ticks < 1:
        raise ValueError(f"n_ticks must be >= 1, got {n_ticks}")
    units = units or UnitSystem()
    j = momentum_for_beta(beta, resolution, units)
    n_cells = n_cells or max(DEFAULT_DILATION_CELLS, j * n_ticks + 1)
    logger.info(f"Time dilation: beta={beta}, tau_R={resolution}, j={j}, {n_ticks} ticks, {n_cells} cells")

    st = build_spacetime(n_ticks, resolution, n_cells, [Particle(pid=PARTICLE_ID, momentum=j)], units=units)
    trace = run(st, n_ticks, verbosity)

    tick_len = resolution / (units.c * units.v_t)
    rows = []
    for obs in trace.rows_for(PARTICLE_ID):
        ta = analytic_lab_time(obs.tick, beta, tick_len)
        rows.append(
            DilationRow(
                Tw=obs.tick,
                x=obs.x_std,
                t=obs.t_std,
                ta=ta,
                err_pct=_error_pct(obs.t_std, ta),
                tp=obs.tp_std,
            )
        )
    return rows, trace


def run_time_dilation(
    beta: float,
    resolution: int,
    n_ticks: int,
    units: Optional[UnitSystem] = None,
    n_cells: Optional[int] = None,
) -> list[DilationRow]:
    rows, _ = time_dilation_experiment(beta, resolution, n_ticks, units, n_cells)
    return rows


def constant_force_experiment(
    t_i: int,
    mu: int,
    resolution: int,
    n_ticks: int,
    units: Optional[UnitSystem] = None,
    n_cells: Optional[int] = None,
    verbosity: Verbosity = Verbosity.QUIET,
) -> tuple[list[ForceRow], ExperimentTrace]:
    """Particle at rest at the origin, one carrier of t_i acts per tick."""
    if t_i < 0:
        raise ValueError(f"t_i must be non-negative, got {t_i}")
    if mu < 1:
        raise ValueError(f"mu must be >= 1 (the particle's own mass unit), got {mu}")
    if n_ticks < 1:
        raise ValueError(f"n_ticks must be >= 1, got {n_ticks}")
    units = units or UnitSystem()
    n_cells = n_cells or max(DEFAULT_FORCE_CELLS, resolution * n_ticks + 1)
    schedule = {k: Carrier(acts=t_i) for k in range(1, n_ticks + 1)} if t_i > 0 else {}
    logger.info(f"Constant force: t_i={t_i}, mu={mu}, tau_R={resolution}, {n_ticks} ticks, {n_cells} cells")

    particle = Particle(pid=PARTICLE_ID, rest_mass=mu, mass_register=mu - 1)
    st = build_spacetime(n_ticks, resolution, n_cells, [particle], schedule, units)
    trace = run(st, n_ticks, verbosity)

    rows = []
    for obs in trace.rows_for(PARTICLE_ID):
        v = obs.v_meas if obs.v_meas is not None else 0.0
        va = analytic_velocity(obs.p_meas)
        ea = analytic_energy(obs.p_meas)
        rows.append(
            ForceRow(
                Tw=obs.tick,
                p=obs.p_meas,
                v=v,
                va=va,
                v_err_pct=_error_pct(v, va),
                E=obs.E_meas,
                Ea=ea,
                E_err_pct=_error_pct(obs.E_meas, ea),
            )
        )
    return rows, trace


def run_constant_force(
    t_i: int,
    mu: int,
    resolution: int,
    n_ticks: int,
    units: Optional[UnitSystem] = None,
    n_cells: Optional[int] = None,
) -> list[ForceRow]:
    rows, _ = constant_force_experiment(t_i, mu, resolution, n_ticks, units, n_cells)
    return rows


def worldline_points(trace: ExperimentTrace, pid: str = PARTICLE_ID) -> list[tuple[float, float]]:
    """(x, t) per completed tick, standard units."""
    return [(o.x_std, o.t_std) for o in trace.rows_for(pid) if o.tick >= 1]


def vp_curve_points(rows: Sequence[ForceRow]) -> list[tuple[float, float, float]]:
    return [(r.p, r.v, r.va) for r in rows]


def run_convergence(
    beta: float,
    resolutions: Sequence[int] = (10, 20, 40),
    n_ticks: int = 8,
    units: Optional[UnitSystem] = None,
) -> list[ConvergenceRow]:
    """Largest tick-wise |t - ta| / ta of the dilation run at each resolution."""
    result = []
    for resolution in resolutions:
        rows = run_time_dilation(beta, resolution, n_ticks, units)
        worst = max((r.err_pct for r in rows if r.Tw >= 1), default=0.0)
        bound = 100.0 / (resolution * math.sqrt(1.0 + beta**2))
        logger.info(f"Convergence tau_R={resolution}: max err {worst:.4f}% (bound {bound:.4f}%)")
        result.append(ConvergenceRow(resolution=resolution, max_err_pct=worst, bound_pct=bound))
    return result


def run_speed_sweep(
    n_cases: int = 1000,
    resolutions: tuple[int, int] = (2, 50),
    n_ticks: int = 100,
    max_acts: int = 3,
    seed: int = 0,
    units: Optional[UnitSystem] = None,
    progress: bool = True,
) -> SpeedSweepResult:
    """
    Random runs from the middle of a lattice of 2*tau_R*n_ticks+1 cells:
    initial j in 0..3*tau_R and a carrier of 0..max_acts acts each tick,
    lengthening or shortening with equal odds.

    A case violates the cap if any tick moves the particle more than tau_R
    cells, or if an outward tick (moving away from the origin) measures a
    velocity above 1. Inward ticks are counted apart: clocks are synchronized
    from the origin, so a tick toward it can read less lab time than cells
    crossed, and even a negative lab time.
    """
    lo, hi = resolutions
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid resolution range {resolutions}")
    rng = np.random.default_rng(seed)
    result = SpeedSweepResult()

    for case in tqdm(range(n_cases), desc="speed sweep", disable=not progress):
        resolution = int(rng.integers(lo, hi + 1))
        j0 = int(rng.integers(0, 3 * resolution + 1))
        acts = rng.integers(0, max_acts + 1, size=n_ticks)
        signs = rng.choice((-1, 1), size=n_ticks)
        schedule = {k + 1: Carrier(acts=int(a), sign=int(s)) for k, (a, s) in enumerate(zip(acts, signs)) if a > 0}

        start = resolution * n_ticks
        st = build_spacetime(
            n_ticks,
            resolution,
            2 * start + 1,
            [Particle(pid=PARTICLE_ID, position=start, momentum=j0)],
            schedule,
            units,
        )
        observations = run(st, n_ticks, Verbosity.QUIET, cell_clocks=False).rows_for(PARTICLE_ID)

        positions = np.array([o.position for o in observations])
        steps = np.diff(positions)
        velocities = np.array([np.nan if o.v_meas is None else o.v_meas for o in observations[1:]], dtype=float)
        outward = (steps >= 0) & ~np.isnan(velocities)
        inward = steps < 0

        step_ratio = float(np.abs(steps).max()) / resolution if steps.size else 0.0
        v_max = float(velocities[outward].max()) if outward.any() else 0.0

        result.cases += 1
        result.max_step_ratio = max(result.max_step_ratio, step_ratio)
        result.max_velocity = max(result.max_velocity, v_max)
        result.inward_ticks += int(inward.sum())
        inward_v = np.abs(velocities[inward & ~np.isnan(velocities)])
        if inward_v.size:
            result.max_inward_velocity = max(result.max_inward_velocity, float(inward_v.max()))
        if step_ratio > 1 or v_max > 1:
            result.violations.append(f"case {case}: tau_R={resolution}, j0={j0}, step/tau_R={step_ratio}, v={v_max}")

    if result.violations:
        logger.warning(f"Speed sweep: {len(result.violations)} of {result.cases} cases exceed the cap")
    logger.info(
        f"Speed sweep: {result.cases} cases, max step/tau_R={result.max_step_ratio:.4f}, "
        f"max outward v={result.max_velocity:.4f}, {result.inward_ticks} inward ticks"
    )
    return result


def interaction_rate(trace: ExperimentTrace, pid: str = PARTICLE_ID) -> float:
    """Realized carriers per unit of measured lab time, up to the last observation."""
    rows = trace.rows_for(pid)
    if not rows or rows[-1].t_std <= 0:
        raise ValueError(f"no elapsed lab time recorded for particle {pid!r}")
    return trace.realized_carriers.get(pid, 0) / rows[-1].t_std


def run_sync_table(sigma_max: int, rho_max: int, ratio: Fraction = Fraction(1)) -> list[SyncRow]:
    """marked_index for every (sigma, rho) in the grid, sigma-major."""
    if sigma_max < 0 or rho_max < 0:
        raise ValueError(f"sigma_max and rho_max must be non-negative, got {sigma_max}, {rho_max}")
    size = (sigma_max + 1) * (rho_max + 1)
    if size > MAX_SYNC_TABLE_ROWS:
        raise ValueError(f"sync table of {size} rows exceeds the limit of {MAX_SYNC_TABLE_ROWS}")
    return [
        SyncRow(sigma=s, rho=r, marked=marked_index(s, r, ratio))
        for s in range(sigma_max + 1)
        for r in range(rho_max + 1)
    ]
