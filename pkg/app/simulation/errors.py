"""
Run-time signals raised by the simulation.

Bad arguments to pure operations raise ValueError; the classes below are
conditions reached while a spacetime is being run.
"""


class SimulationError(RuntimeError):
    """Base class for failures of a running simulation."""


class OutOfSpaceError(SimulationError):
    """A particle tried to step past the edge of the lattice."""

    def __init__(self, position: int, destination: int, n_cells: int):
        self.position = position
        self.destination = destination
        self.n_cells = n_cells
        super().__init__(
            f"Particle at cell {position} cannot move to cell {destination}: "
            f"lattice holds cells 0..{n_cells - 1}"
        )


class OccupiedCellError(SimulationError):
    """A second particle was placed in or moved into an occupied cell."""


class TimelineExhausted(SimulationError):
    """The lab timeline has no node left to shift to."""


class SyncHorizonError(TimelineExhausted):
    """A cell's next local tick falls beyond the end of the timeline."""

    def __init__(self, x: int, marked: int, horizon: int):
        self.x = x
        self.marked = marked
        self.horizon = horizon
        super().__init__(f"Cell {x} needs lab node {marked}, timeline ends at node {horizon}")


class InteractionForbidden(SimulationError):
    """do_impact was attempted while motion is in progress or particle time is stopped."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Interaction forbidden: {reason}")
