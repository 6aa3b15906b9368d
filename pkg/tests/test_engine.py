import pytest
from hypothesis import given, settings, strategies as st

from app.simulation.engine import (
    EventKind,
    Verbosity,
    build_spacetime,
    measure,
    run,
)
from app.simulation.errors import OccupiedCellError, TimelineExhausted
from app.simulation.particle_dynamics import Carrier, Particle
from app.simulation.temporal_network import advance


def single_run(momentum=0, ticks=8, resolution=10, schedule=None, verbosity=Verbosity.QUIET, **particle):
    p = Particle(pid="p0", momentum=momentum, **particle)
    cells = max(resolution * ticks + 1, 2)
    st_ = build_spacetime(ticks, resolution, cells, [p], schedule)
    trace = run(st_, ticks, verbosity)
    return st_, trace, trace.rows_for("p0")


class TestBuildSpacetime:
    def test_places_particles(self):
        st_ = build_spacetime(2, 10, 40, [Particle(pid="a", position=3)])
        assert st_.lattice.cell(3).occupant == "a"

    def test_timeline_covers_measured_clocks(self):
        st_ = build_spacetime(7, 10, 80, [Particle(pid="p0", momentum=5)])
        # farthest reachable cell 70: marked_index(70, 70) = 99
        assert st_.timeline.last_index >= 99

    def test_duplicate_cell(self):
        with pytest.raises(OccupiedCellError):
            build_spacetime(1, 10, 10, [Particle(pid="a"), Particle(pid="b")])


class TestRun:
    def test_empty_lattice(self):
        st_ = build_spacetime(3, 10, 1)
        trace = run(st_, 3, Verbosity.TICKS)
        assert [(e.node_index, e.kind) for e in trace.events] == [
            (10, EventKind.ADVANCE),
            (20, EventKind.ADVANCE),
            (30, EventKind.ADVANCE),
        ]
        assert trace.final_node == 30

    def test_constant_momentum_positions(self):
        _, _, rows = single_run(momentum=5, ticks=8)
        assert [r.position for r in rows] == [5 * k for k in range(9)]

    def test_dilation_observables(self):
        _, _, rows = single_run(momentum=5, ticks=8)
        assert [r.t_nodes for r in rows[1:8]] == [12, 23, 34, 45, 56, 68, 79]
        row = rows[4]
        assert (row.x_std, row.t_std, row.tp_std) == pytest.approx((2.0, 4.5, 4.0))

    def test_rest_particle(self):
        _, _, rows = single_run(momentum=0, ticks=5)
        for row in rows[1:]:
            assert row.v_meas == 0.0
            assert row.E_meas == 1.0
            assert row.t_std == pytest.approx(row.tick)
            assert row.tp_std == pytest.approx(row.tick)

    def test_time_stops_at_resolution(self):
        schedule = {k: Carrier(acts=1) for k in range(1, 6)}
        _, trace, rows = single_run(momentum=10, ticks=5, schedule=schedule)
        assert all(r.proper_ticks == 0 for r in rows)
        assert trace.dropped_carriers["p0"] == 5
        assert trace.realized_carriers["p0"] == 0
        assert rows[-1].gamma is None

    def test_moving_clock_runs_slow_from_first_tick(self):
        _, _, rows = single_run(momentum=3, ticks=6)
        assert all(r.tp_std < r.t_std for r in rows[1:])

    def test_displacement_capped_per_tick(self):
        _, _, rows = single_run(momentum=25, ticks=4)
        assert [r.position for r in rows] == [0, 10, 20, 30, 40]

    def test_carriers_accelerate(self):
        schedule = {k: Carrier(acts=1) for k in range(1, 5)}
        st_, trace, rows = single_run(ticks=4, schedule=schedule)
        assert [r.position for r in rows] == [0, 1, 3, 6, 10]
        assert [r.p_register for r in rows] == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.4])
        assert trace.realized_carriers["p0"] == 4
        assert st_.particles["p0"].momentum == 4

    def test_negative_carrier_decelerates(self):
        schedule = {1: Carrier(acts=1, sign=-1), 2: Carrier(acts=1, sign=-1)}
        st_, _, rows = single_run(momentum=4, ticks=2, schedule=schedule)
        assert [r.position for r in rows] == [0, 3, 5]
        # work against the motion
        assert rows[-1].E_meas < 1.0

    def test_constant_reverse_schedule_oscillates(self):
        schedule = {k: Carrier(acts=1, sign=-1) for k in range(1, 5)}
        st_ = build_spacetime(4, 10, 21, [Particle(pid="p0", position=10)], schedule)
        rows = run(st_, 4, Verbosity.QUIET).rows_for("p0")
        assert [r.position for r in rows] == [10, 9, 9, 10, 10]
        assert [r.p_register for r in rows] == pytest.approx([-0.1, 0.0, 0.1, 0.0, 0.0])

    def test_skip_list_delays_motion(self):
        schedule = {k: Carrier(acts=1) for k in range(1, 5)}
        _, _, rows = single_run(ticks=4, schedule=schedule, mass_register=2, rest_mass=3)
        assert [r.position for r in rows] == [0, 0, 0, 1, 3]

    def test_rejects_short_timeline(self):
        st_ = build_spacetime(1, 10, 10)
        with pytest.raises(TimelineExhausted):
            run(st_, 5)

    def test_runs_once(self):
        st_, _, _ = single_run(ticks=1)
        with pytest.raises(ValueError):
            run(st_, 1)

    def test_drain_fires_every_measured_clock(self):
        st_, trace, rows = single_run(momentum=5, ticks=1, verbosity=Verbosity.CELLS)
        assert trace.final_node == 12
        fired = {(e.node_index, e.x) for e in trace.events if e.kind is EventKind.LOCAL_TICK}
        assert (12, 5) in fired
        assert st_.lattice.cell(5).local_ticks == 1

    def test_verbosity_filters(self):
        _, quiet, _ = single_run(momentum=2, ticks=2, verbosity=Verbosity.QUIET)
        _, ticks, _ = single_run(momentum=2, ticks=2, verbosity=Verbosity.TICKS)
        _, nodes, _ = single_run(momentum=2, ticks=2, verbosity=Verbosity.NODES)
        assert quiet.events == []
        assert EventKind.LOCAL_TICK not in {e.kind for e in ticks.events}
        assert len([e for e in nodes.events if e.kind is EventKind.ADVANCE]) == nodes.final_node

    def test_deterministic(self):
        schedule = {k: Carrier(acts=2) for k in range(1, 4)}
        _, first, _ = single_run(ticks=3, schedule=schedule, verbosity=Verbosity.NODES)
        _, second, _ = single_run(ticks=3, schedule=schedule, verbosity=Verbosity.NODES)
        assert first.events == second.events
        assert first.observations == second.observations


class TestMeasure:
    def test_repeat_call_is_stable(self):
        schedule = {1: Carrier(acts=1), 2: Carrier(acts=1)}
        st_ = build_spacetime(2, 10, 30, [Particle(pid="p0")], schedule)
        run(st_, 2)
        p = st_.particles["p0"]
        st_.timeline.cursor = 20
        first = measure(st_, p)
        assert measure(st_, p) is first
        assert st_.ledgers["p0"].impulse == 21

    def test_only_at_bearing_nodes(self):
        st_ = build_spacetime(1, 10, 5, [Particle(pid="p0")])
        advance(st_.timeline)
        with pytest.raises(ValueError):
            measure(st_, st_.particles["p0"])

    def test_origin_observation(self):
        st_ = build_spacetime(1, 10, 5, [Particle(pid="p0")])
        obs = measure(st_, st_.particles["p0"])
        assert (obs.tick, obs.t_nodes, obs.p_meas, obs.E_meas) == (0, 0, 0.0, 1.0)
        assert obs.v_meas is None


class TestSpeedCap:
    @given(
        resolution=st.integers(min_value=2, max_value=12),
        j_scale=st.floats(min_value=0.0, max_value=3.0),
        acts=st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=15),
    )
    @settings(max_examples=150, deadline=None)
    def test_forward_runs_never_exceed_light(self, resolution, j_scale, acts):
        ticks = len(acts)
        schedule = {k + 1: Carrier(acts=a) for k, a in enumerate(acts) if a > 0}
        _, _, rows = single_run(momentum=int(j_scale * resolution), ticks=ticks, resolution=resolution, schedule=schedule)
        for before, after in zip(rows, rows[1:]):
            assert 0 <= after.position - before.position <= resolution
            assert after.v_meas <= 1.0

    @given(resolution=st.integers(min_value=3, max_value=20), momentum=st.integers(min_value=0, max_value=60))
    @settings(max_examples=100, deadline=None)
    def test_constant_momentum_strictly_below_light(self, resolution, momentum):
        _, _, rows = single_run(momentum=momentum, ticks=6, resolution=resolution)
        assert all(r.v_meas < 1.0 for r in rows[1:])

    @given(
        resolution=st.integers(min_value=2, max_value=10),
        j0=st.integers(min_value=0, max_value=20),
        carriers=st.lists(
            st.tuples(st.integers(min_value=0, max_value=3), st.sampled_from((-1, 1))), min_size=1, max_size=12
        ),
    )
    @settings(max_examples=150, deadline=None)
    def test_signed_runs_from_mid_lattice(self, resolution, j0, carriers):
        ticks = len(carriers)
        start = resolution * ticks
        schedule = {k + 1: Carrier(acts=a, sign=s) for k, (a, s) in enumerate(carriers) if a > 0}
        st_ = build_spacetime(ticks, resolution, 2 * start + 1, [Particle(pid="p0", position=start, momentum=j0)], schedule)
        rows = run(st_, ticks, Verbosity.QUIET, cell_clocks=False).rows_for("p0")
        for before, after in zip(rows, rows[1:]):
            step = after.position - before.position
            assert abs(step) <= resolution
            if step >= 0 and after.v_meas is not None:
                assert 0.0 <= after.v_meas <= 1.0

    def test_inward_tick_reads_less_lab_time(self):
        # clocks are synchronized from the origin: 100 -> 95 reads t 100 -> 96
        st_ = build_spacetime(1, 10, 101, [Particle(pid="p0", position=100, momentum=5, direction=-1)])
        first, second = run(st_, 1, Verbosity.QUIET).rows_for("p0")
        assert (first.t_nodes, second.t_nodes) == (100, 96)
        assert second.position == 95
        assert second.v_meas == pytest.approx(1.25)


class TestCellClocks:
    def test_observations_do_not_depend_on_cell_clocks(self):
        schedule = {1: Carrier(acts=2), 3: Carrier(acts=1, sign=-1), 4: Carrier(acts=3)}

        def observations(cell_clocks):
            st_ = build_spacetime(6, 10, 120, [Particle(pid="p0", position=20, momentum=1)], schedule)
            return run(st_, 6, Verbosity.QUIET, cell_clocks=cell_clocks)

        with_clocks, without = observations(True), observations(False)
        assert with_clocks.rows_for("p0") == without.rows_for("p0")
        assert with_clocks.realized_carriers == without.realized_carriers
        assert without.final_node == 60

    def test_cells_stay_unshifted_without_clocks(self):
        st_ = build_spacetime(2, 10, 30, [Particle(pid="p0")])
        trace = run(st_, 2, Verbosity.CELLS, cell_clocks=False)
        assert not any(e.kind is EventKind.LOCAL_TICK for e in trace.events)
        assert all(c.local_ticks == 0 for c in st_.lattice.cells)

    def test_far_cell_fires_twice_on_one_node(self):
        st_ = build_spacetime(2, 10, 221, [Particle(pid="p0", position=200)])
        trace = run(st_, 2, Verbosity.CELLS)
        shifts = [(e.node_index, e.x) for e in trace.events if e.kind is EventKind.LOCAL_TICK]
        assert shifts.count((201, 200)) == 2
        assert st_.lattice.cell(200).local_ticks == 2


class TestEventOrder:
    @given(
        j0=st.integers(min_value=0, max_value=12),
        carriers=st.lists(
            st.tuples(st.integers(min_value=0, max_value=3), st.sampled_from((-1, 1))), min_size=1, max_size=8
        ),
    )
    @settings(max_examples=100, deadline=None)
    def test_move_and_impact_never_share_a_node(self, j0, carriers):
        ticks = len(carriers)
        schedule = {k + 1: Carrier(acts=a, sign=s) for k, (a, s) in enumerate(carriers) if a > 0}
        st_ = build_spacetime(ticks, 10, 20 * ticks + 1, [Particle(pid="p0", position=10 * ticks, momentum=j0)], schedule)
        trace = run(st_, ticks, Verbosity.TICKS, cell_clocks=False)
        moves = {e.node_index for e in trace.events if e.kind is EventKind.MOVE}
        impacts = {e.node_index for e in trace.events if e.kind is EventKind.IMPACT}
        assert moves.isdisjoint(impacts)

    def test_no_move_after_reset_on_the_same_node(self):
        schedule = {k: Carrier(acts=1) for k in range(1, 10)}
        _, trace, _ = single_run(momentum=3, ticks=9, schedule=schedule, verbosity=Verbosity.NODES)
        nodes = [e.node_index for e in trace.events]
        assert nodes == sorted(nodes)
        reset_at = set()
        for e in trace.events:
            if e.kind is EventKind.RESET:
                reset_at.add(e.node_index)
            elif e.kind is EventKind.MOVE:
                assert e.node_index not in reset_at

    def test_occupancy_conserved(self):
        particles = [Particle(pid="p0", momentum=2), Particle(pid="p1", position=10, momentum=5)]
        st_ = build_spacetime(6, 10, 61, particles)
        trace = run(st_, 6, Verbosity.NODES)
        positions = {"p0": 0, "p1": 10}
        node = 0
        for e in trace.events:
            if e.node_index != node:
                assert len(set(positions.values())) == len(positions)
                node = e.node_index
            if e.kind is EventKind.MOVE:
                pid = e.particle.pid
                assert abs(e.particle.position - positions[pid]) == 1
                positions[pid] = e.particle.position
        assert positions == {"p0": 12, "p1": 40}
        assert st_.lattice.cell(12).occupant == "p0"
        assert st_.lattice.cell(40).occupant == "p1"
        assert sum(c.occupant is not None for c in st_.lattice.cells) == 2
