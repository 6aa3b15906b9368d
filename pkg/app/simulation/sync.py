"""
Synchronization of laboratory time and cell local time.

Rule: a cell at distance rho fires its k-th local tick on the first lab node
tau with tau^2 >= sigma^2 + (rho * v_t/v_l)^2, sigma = k * tau_R.
Mechanism: on every lab node, cells whose marked node is reached shift their
local time and are immediately rescheduled for their next tick.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from app.simulation.errors import SyncHorizonError
from app.simulation.temporal_network import SpaceCell, SpaceLattice, TimeNode


@dataclass(frozen=True)
class SyncParams:
    resolution: int
    ratio: Fraction = Fraction(1)

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {self.resolution}")
        if self.ratio <= 0:
            raise ValueError(f"ratio must be positive, got {self.ratio}")


def _ceil_sqrt(n: int) -> int:
    root = math.isqrt(n)
    return root if root * root == n else root + 1


def marked_index(sigma: int, rho: int, ratio: Fraction = Fraction(1)) -> int:
    """Smallest integer tau with tau^2 >= sigma^2 + (rho*ratio)^2, computed exactly."""
    if sigma < 0 or rho < 0:
        raise ValueError(f"sigma and rho must be non-negative, got sigma={sigma}, rho={rho}")
    if ratio == 1:
        return _ceil_sqrt(sigma * sigma + rho * rho)
    ratio = Fraction(ratio)
    a, b = ratio.numerator, ratio.denominator
    # (tau*b)^2 >= (sigma*b)^2 + (rho*a)^2, tau*b an integer
    scaled = _ceil_sqrt((sigma * b) ** 2 + (rho * a) ** 2)
    return -(-scaled // b)


def brute_force_marked_index(sigma: int, rho: int, ratio: Fraction = Fraction(1)) -> int:
    """Linear scan over node numbers; audit oracle for marked_index."""
    target = sigma * sigma + (rho * Fraction(ratio)) ** 2
    tau = sigma
    while tau * tau < target:
        tau += 1
    return tau


def synchronize_cell(cell: SpaceCell, params: SyncParams, horizon: Optional[int] = None) -> SpaceCell:
    """Assign the marked node of the cell's next local tick (number local_ticks + 1)."""
    k = cell.local_ticks + 1
    marked = marked_index(k * params.resolution, abs(cell.x), params.ratio)
    if horizon is not None and marked > horizon:
        raise SyncHorizonError(cell.x, marked, horizon)
    cell.marked = marked
    return cell


def schedule_lattice(lattice: SpaceLattice, params: SyncParams, horizon: Optional[int] = None) -> int:
    """Schedule every unscheduled cell; returns the number of cells put on the agenda."""
    scheduled = 0
    for cell in lattice.cells:
        if cell.marked is not None:
            continue
        try:
            synchronize_cell(cell, params, horizon)
        except SyncHorizonError:
            continue
        lattice.enqueue(cell)
        scheduled += 1
    return scheduled


def dispatch_tick(
    node: TimeNode,
    lattice: SpaceLattice,
    params: SyncParams,
    horizon: Optional[int] = None,
) -> list[SpaceCell]:
    """
    Shift local time in every cell marked at this node.

    Far from the origin two consecutive local ticks can share a lab node
    (x=200, tau_R=10: ticks 1 and 2 both land on node 201). Such a cell
    fires every tick due here before it goes back on the agenda, and is
    listed once per tick fired. Returns the shifted cells in x order.
    """
    shifted = []
    for cell in lattice.due(node.index):
        while True:
            cell.local_ticks += 1
            shifted.append(cell)
            try:
                synchronize_cell(cell, params, horizon)
            except SyncHorizonError:
                # parked: no further local tick inside this timeline
                cell.marked = None
                break
            if cell.marked != node.index:
                lattice.enqueue(cell)
                break
    return shifted
