"""
The node loop of the spacetime.

Per lab node, in fixed order:
  1. advance the timeline one node
  2. cells marked at this node shift local time; every particle
     gets one motion step from its cell
  3. on a bearing node: the carrier for the next tick is offered to each
     particle (do_impact), the particle is reset, and the closing tick is
     measured

The run opens at node 0 (carrier for tick 1, reset without a proper tick,
tick-0 observation) and, after the last bearing node, keeps shifting local
time until every clock reading used by an observation has fired.
"""
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable, Optional

from app.simulation.errors import InteractionForbidden, TimelineExhausted
from app.simulation.particle_dynamics import (
    Carrier,
    MotionStatus,
    Particle,
    ParticleSnapshot,
    do_impact,
    force_from_intensity,
    reset,
    step_motion,
)
from app.simulation.sync import SyncParams, dispatch_tick, marked_index, schedule_lattice
from app.simulation.temporal_network import (
    LabTimeline,
    SpaceLattice,
    TimeNode,
    advance,
    build_lattice,
    build_timeline,
)
from app.simulation.units import (
    UnitSystem,
    distance_to_standard,
    mass_to_standard,
    time_to_standard,
)
from app.utils.logger import logger


class EventKind(str, Enum):
    ADVANCE = "advance"
    LOCAL_TICK = "local-tick"
    MOVE = "move"
    RESET = "reset"
    IMPACT = "impact"
    IMPACT_REJECTED = "impact-rejected"
    PROPER_TICK = "proper-tick"


class Verbosity(IntEnum):
    QUIET = 0  # observations only
    TICKS = 1  # bearing advances and particle events
    CELLS = 2  # + local time shifts
    NODES = 3  # + ordinary node shifts


_EVENT_LEVEL = {
    EventKind.LOCAL_TICK: Verbosity.CELLS,
    EventKind.MOVE: Verbosity.TICKS,
    EventKind.RESET: Verbosity.TICKS,
    EventKind.IMPACT: Verbosity.TICKS,
    EventKind.IMPACT_REJECTED: Verbosity.TICKS,
    EventKind.PROPER_TICK: Verbosity.TICKS,
}


@dataclass(frozen=True)
class TraceEvent:
    node_index: int
    kind: EventKind
    x: Optional[int] = None
    particle: Optional[ParticleSnapshot] = None


@dataclass(frozen=True)
class Observation:
    """Per-tick measurement of one particle, natural and standard units."""

    pid: str
    tick: int
    node_index: int
    position: int
    t_nodes: int
    proper_ticks: int
    x_std: float
    t_std: float
    tp_std: float
    p_register: float  # j / tau_R
    v_meas: Optional[float]  # coordinate velocity over the last tick
    p_meas: float  # impulse, m0*c units
    E_meas: float  # rest energy + work, m0*c^2 units
    gamma: Optional[float]  # dt / dtp over the last tick


@dataclass
class MotionLedger:
    """Running bookkeeping between two measurements of one particle."""

    last_position: int
    last_t_nodes: int
    last_proper_ticks: int = 0
    impulse: int = 0  # sum of signed acts * lab nodes
    work: int = 0  # sum of signed acts * cells
    tick_acts: dict[int, int] = field(default_factory=dict)
    realized: int = 0
    dropped: int = 0
    last: Optional[Observation] = None


@dataclass
class Spacetime:
    timeline: LabTimeline
    lattice: SpaceLattice
    particles: dict[str, Particle]
    sync: SyncParams
    units: UnitSystem
    carrier_schedule: dict[int, Carrier] = field(default_factory=dict)
    ledgers: dict[str, MotionLedger] = field(default_factory=dict)

    def __post_init__(self):
        if self.timeline.resolution != self.sync.resolution:
            raise ValueError(
                f"timeline resolution {self.timeline.resolution} != sync resolution {self.sync.resolution}"
            )
        for pid, p in self.particles.items():
            if pid != p.pid:
                raise ValueError(f"particle keyed {pid!r} carries pid {p.pid!r}")
            self.lattice.place(pid, p.position)
            self.ledgers.setdefault(
                pid,
                MotionLedger(
                    last_position=p.position,
                    last_t_nodes=marked_index(0, abs(p.position), self.sync.ratio),
                    last_proper_ticks=p.proper_ticks,
                ),
            )


@dataclass
class ExperimentTrace:
    verbosity: Verbosity = Verbosity.TICKS
    events: list[TraceEvent] = field(default_factory=list)
    observations: dict[str, list[Observation]] = field(default_factory=lambda: defaultdict(list))
    dropped_carriers: dict[str, int] = field(default_factory=dict)
    realized_carriers: dict[str, int] = field(default_factory=dict)
    final_node: int = 0

    def emit(self, event: TraceEvent, level: Verbosity) -> None:
        if self.verbosity >= level:
            self.events.append(event)

    def rows_for(self, pid: str) -> list[Observation]:
        return list(self.observations.get(pid, []))


def required_ticks(until_tick: int, resolution: int, reach: int, ratio) -> int:
    """Timeline length (in ticks) covering every clock reading a run can need."""
    needed = marked_index(until_tick * resolution, reach, ratio)
    return max(1, until_tick, -(-needed // resolution))


def build_spacetime(
    until_tick: int,
    resolution: int,
    n_cells: int,
    particles: Iterable[Particle] = (),
    carrier_schedule: Optional[dict[int, Carrier]] = None,
    units: Optional[UnitSystem] = None,
) -> Spacetime:
    """Assemble a spacetime whose timeline is long enough for until_tick."""
    units = units or UnitSystem()
    particles = list(particles)
    params = SyncParams(resolution=resolution, ratio=units.node_per_cell)
    start = max((abs(p.position) for p in particles), default=0)
    reach = min(start + until_tick * resolution, n_cells - 1)
    total = required_ticks(until_tick, resolution, reach, params.ratio)
    return Spacetime(
        timeline=build_timeline(total, resolution),
        lattice=build_lattice(n_cells),
        particles={p.pid: p for p in particles},
        sync=params,
        units=units,
        carrier_schedule=dict(carrier_schedule or {}),
    )


def measure(st: Spacetime, p: Particle) -> Observation:
    """Observation of the tick that closes at the current node (node 0 or a bearing node)."""
    node = st.timeline.current
    if node.index != 0 and not node.bearing:
        raise ValueError(f"measure is defined at bearing nodes, node {node.index} is ordinary")
    ledger = st.ledgers[p.pid]
    tau_r = st.sync.resolution
    tick = node.index // tau_r
    if ledger.last is not None and ledger.last.tick == tick:
        return ledger.last

    u = st.units
    t_nodes = marked_index(tick * tau_r, abs(p.position), st.sync.ratio)
    d_rho = p.position - ledger.last_position
    d_tau = t_nodes - ledger.last_t_nodes
    d_proper = p.proper_ticks - ledger.last_proper_ticks

    acts = ledger.tick_acts.get(tick, 0)
    ledger.impulse += acts * d_tau
    ledger.work += acts * d_rho

    force_per_act = force_from_intensity(1, u, tau_r)
    m0 = mass_to_standard(p.rest_mass, u)
    observation = Observation(
        pid=p.pid,
        tick=tick,
        node_index=node.index,
        position=p.position,
        t_nodes=t_nodes,
        proper_ticks=p.proper_ticks,
        x_std=distance_to_standard(p.position, u),
        t_std=time_to_standard(t_nodes, u),
        tp_std=time_to_standard(p.proper_ticks * tau_r, u),
        p_register=p.signed_momentum / tau_r,
        v_meas=None if d_tau == 0 else (d_rho * u.c * u.v_t) / (d_tau * u.v_l),
        p_meas=force_per_act * ledger.impulse / (u.c * u.v_t) / (m0 * u.c),
        E_meas=1.0 + force_per_act * ledger.work / u.v_l / (m0 * u.c**2),
        gamma=None if d_proper == 0 else d_tau / (d_proper * tau_r),
    )

    ledger.last_position = p.position
    ledger.last_t_nodes = t_nodes
    ledger.last_proper_ticks = p.proper_ticks
    ledger.last = observation
    return observation


def _offer_carrier(st: Spacetime, p: Particle, tick: int, node_index: int, trace: ExperimentTrace) -> None:
    carrier = st.carrier_schedule.get(tick)
    if carrier is None:
        return
    ledger = st.ledgers[p.pid]
    direction = p.direction
    try:
        do_impact(p, carrier, st.sync.resolution)
    except InteractionForbidden as e:
        ledger.dropped += 1
        trace.emit(TraceEvent(node_index, EventKind.IMPACT_REJECTED, p.position, p.snapshot()), Verbosity.TICKS)
        logger.debug(f"Node {node_index}: carrier for tick {tick} dropped ({e.reason})")
        return
    ledger.realized += 1
    ledger.tick_acts[tick] = carrier.sign * direction * carrier.acts
    trace.emit(TraceEvent(node_index, EventKind.IMPACT, p.position, p.snapshot()), Verbosity.TICKS)


def _record(st: Spacetime, p: Particle, trace: ExperimentTrace) -> None:
    observation = measure(st, p)
    trace.observations[p.pid].append(observation)
    logger.debug(
        f"Tick {observation.tick} {p.pid}: x={observation.x_std} t={observation.t_std} "
        f"tp={observation.tp_std} j={p.signed_momentum}"
    )


def _shift_node(st: Spacetime, trace: ExperimentTrace, cell_clocks: bool) -> TimeNode:
    node = advance(st.timeline)
    level = Verbosity.TICKS if node.bearing else Verbosity.NODES
    trace.emit(TraceEvent(node.index, EventKind.ADVANCE), level)
    if cell_clocks:
        for cell in dispatch_tick(node, st.lattice, st.sync, st.timeline.last_index):
            trace.emit(TraceEvent(node.index, EventKind.LOCAL_TICK, cell.x), Verbosity.CELLS)
    return node


def run(
    st: Spacetime,
    until_tick: int,
    verbosity: Verbosity = Verbosity.TICKS,
    cell_clocks: bool = True,
) -> ExperimentTrace:
    """
    Execute the node loop through bearing node until_tick * tau_R.

    With cell_clocks=False the lattice clocks are not dispatched and the
    closing drain is skipped: observations read marked_index directly and
    come out the same, only LOCAL_TICK events and cell local times are lost.
    """
    if until_tick < 0:
        raise ValueError(f"until_tick must be non-negative, got {until_tick}")
    if st.timeline.cursor != 0:
        raise ValueError(f"spacetime already run to node {st.timeline.cursor}")
    tau_r = st.sync.resolution
    last_bearing = until_tick * tau_r
    if last_bearing > st.timeline.last_index:
        raise TimelineExhausted(
            f"Run to tick {until_tick} needs node {last_bearing}, timeline ends at {st.timeline.last_index}"
        )

    trace = ExperimentTrace(verbosity=verbosity)
    particles = [st.particles[pid] for pid in sorted(st.particles)]
    if cell_clocks:
        schedule_lattice(st.lattice, st.sync, st.timeline.last_index)
    logger.info(
        f"Running {len(particles)} particle(s) to tick {until_tick}: tau_R={tau_r}, "
        f"{st.lattice.size} cells, {st.timeline.last_index + 1} lab nodes"
    )

    # origin event
    for p in particles:
        if until_tick >= 1:
            _offer_carrier(st, p, 1, 0, trace)
        reset(p, count_proper_tick=False)
        trace.emit(TraceEvent(0, EventKind.RESET, p.position, p.snapshot()), Verbosity.TICKS)
        _record(st, p, trace)

    while st.timeline.cursor < last_bearing:
        node = _shift_node(st, trace, cell_clocks)

        for p in particles:
            if step_motion(p, st.lattice) is MotionStatus.MOVED:
                trace.emit(TraceEvent(node.index, EventKind.MOVE, p.position, p.snapshot()), Verbosity.TICKS)

        if not node.bearing:
            continue
        tick = node.index // tau_r
        for p in particles:
            if tick < until_tick:
                _offer_carrier(st, p, tick + 1, node.index, trace)
            before = p.proper_ticks
            reset(p)
            trace.emit(TraceEvent(node.index, EventKind.RESET, p.position, p.snapshot()), Verbosity.TICKS)
            if p.proper_ticks > before:
                trace.emit(TraceEvent(node.index, EventKind.PROPER_TICK, p.position, p.snapshot()), Verbosity.TICKS)
            _record(st, p, trace)

    # let every measured clock reading actually fire
    witness = max((o.t_nodes for rows in trace.observations.values() for o in rows), default=0)
    while cell_clocks and st.timeline.cursor < witness:
        _shift_node(st, trace, cell_clocks)

    trace.final_node = st.timeline.cursor
    for pid, ledger in st.ledgers.items():
        trace.dropped_carriers[pid] = ledger.dropped
        trace.realized_carriers[pid] = ledger.realized
        if ledger.dropped:
            logger.warning(f"Particle {pid}: {ledger.dropped} carrier(s) dropped, {ledger.realized} realized")
    logger.info(f"Run finished at node {trace.final_node} with {len(trace.events)} trace events")
    return trace
