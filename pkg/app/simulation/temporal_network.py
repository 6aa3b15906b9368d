"""
Temporal network: the laboratory timeline and the one-dimensional space lattice.

Links between nodes are ordinals within ordered sequences; the timeline is
still traversed strictly one node shift at a time.
"""
import heapq
from dataclasses import dataclass, field
from typing import Optional

from app.simulation.errors import OccupiedCellError, OutOfSpaceError, TimelineExhausted


@dataclass(frozen=True)
class TimeNode:
    index: int
    bearing: bool


@dataclass
class LabTimeline:
    nodes: list[TimeNode]
    resolution: int
    cursor: int = 0

    @property
    def current(self) -> TimeNode:
        return self.nodes[self.cursor]

    @property
    def last_index(self) -> int:
        return len(self.nodes) - 1

    @property
    def bearing_count(self) -> int:
        """Bearing nodes passed so far (the current tick number)."""
        return self.cursor // self.resolution


@dataclass
class SpaceCell:
    x: int
    local_ticks: int = 0
    marked: Optional[int] = None
    occupant: Optional[str] = None


@dataclass
class SpaceLattice:
    """Cells 0..n-1 plus the agenda of pending local ticks."""

    cells: list[SpaceCell]
    _agenda: list[tuple[int, int]] = field(default_factory=list, repr=False)

    @property
    def size(self) -> int:
        return len(self.cells)

    def contains(self, x: int) -> bool:
        return 0 <= x < len(self.cells)

    def cell(self, x: int) -> SpaceCell:
        if not self.contains(x):
            raise KeyError(f"No cell at x={x} (lattice holds 0..{len(self.cells) - 1})")
        return self.cells[x]

    def neighbor(self, x: int, direction: int) -> int:
        if direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {direction}")
        return x + direction

    def place(self, pid: str, x: int) -> SpaceCell:
        if not self.contains(x):
            raise OutOfSpaceError(x, x, len(self.cells))
        cell = self.cells[x]
        if cell.occupant is not None and cell.occupant != pid:
            raise OccupiedCellError(f"Cell {x} already holds particle {cell.occupant}")
        cell.occupant = pid
        return cell

    def relocate(self, pid: str, source: int, destination: int) -> SpaceCell:
        """Move an occupant one cell; the source is left untouched on failure."""
        if not self.contains(destination):
            raise OutOfSpaceError(source, destination, len(self.cells))
        target = self.cells[destination]
        if target.occupant is not None:
            raise OccupiedCellError(f"Cell {destination} already holds particle {target.occupant}")
        self.cells[source].occupant = None
        target.occupant = pid
        return target

    def enqueue(self, cell: SpaceCell) -> None:
        """Put a cell's marked node on the agenda."""
        if cell.marked is not None:
            heapq.heappush(self._agenda, (cell.marked, cell.x))

    def due(self, node_index: int) -> list[SpaceCell]:
        """Pop every cell whose marked node is node_index, in x order."""
        fired = []
        while self._agenda and self._agenda[0][0] <= node_index:
            marked, x = heapq.heappop(self._agenda)
            cell = self.cells[x]
            # stale entry: the cell was rescheduled after this push
            if cell.marked != marked:
                continue
            if marked < node_index:
                raise RuntimeError(f"Cell {x} missed its marked node {marked} (now at {node_index})")
            fired.append(cell)
        return fired

    def pending(self) -> int:
        return len(self._agenda)


def build_timeline(total_ticks: int, resolution: int) -> LabTimeline:
    """Materialize nodes 0..total_ticks*resolution; bearing at positive multiples of resolution."""
    if total_ticks < 1:
        raise ValueError(f"total_ticks must be >= 1, got {total_ticks}")
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    nodes = [
        TimeNode(index=k, bearing=k > 0 and k % resolution == 0)
        for k in range(total_ticks * resolution + 1)
    ]
    return LabTimeline(nodes=nodes, resolution=resolution)


def build_lattice(n_cells: int) -> SpaceLattice:
    if n_cells < 1:
        raise ValueError(f"n_cells must be >= 1, got {n_cells}")
    return SpaceLattice(cells=[SpaceCell(x=x) for x in range(n_cells)])


def advance(timeline: LabTimeline) -> TimeNode:
    """Shift the cursor to the next node and return it."""
    if timeline.cursor >= timeline.last_index:
        raise TimelineExhausted(f"Timeline exhausted at node {timeline.cursor}")
    timeline.cursor += 1
    return timeline.nodes[timeline.cursor]
