"""
Point particle mechanics: the momentum jump register, motion steps, bearing
resets, interaction through carriers, and the force and start-delay formulas.

A particle can move or interact; interaction is possible only once motion is
completed. The jump register j is refilled into the cursor j_c at every
bearing reset, and the cursor is spent one cell per lab node.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from app.simulation.errors import InteractionForbidden
from app.simulation.temporal_network import SpaceLattice
from app.simulation.units import UnitSystem


class MotionStatus(str, Enum):
    MOVED = "moved"
    COMPLETED = "completed"


@dataclass
class Particle:
    pid: str
    position: int = 0
    momentum: int = 0  # j, length of the jump register
    direction: int = 1
    jump_cursor: int = 0  # j_c, 0 means nothing left of the current jump
    mass_register: int = 0  # Skip list: rest mass units beyond the particle's own one
    proper_ticks: int = 0
    motion_completed: bool = True
    rest_mass: int = 1  # mass units, m0 = rest_mass / v_m

    def __post_init__(self):
        if self.momentum < 0 or self.jump_cursor < 0 or self.mass_register < 0:
            raise ValueError("momentum, jump_cursor and mass_register must be non-negative")
        if self.jump_cursor > self.momentum:
            raise ValueError(f"jump_cursor {self.jump_cursor} exceeds momentum {self.momentum}")
        if self.direction not in (1, -1):
            raise ValueError(f"direction must be +1 or -1, got {self.direction}")

    @property
    def signed_momentum(self) -> int:
        return self.direction * self.momentum

    def time_stopped(self, resolution: int) -> bool:
        return self.momentum >= resolution

    def snapshot(self) -> "ParticleSnapshot":
        return ParticleSnapshot(
            pid=self.pid,
            position=self.position,
            momentum=self.signed_momentum,
            jump_cursor=self.jump_cursor,
            proper_ticks=self.proper_ticks,
        )


@dataclass(frozen=True)
class ParticleSnapshot:
    pid: str
    position: int
    momentum: int
    jump_cursor: int
    proper_ticks: int


@dataclass(frozen=True)
class Carrier:
    acts: int
    sign: int = 1

    def __post_init__(self):
        if self.acts < 1:
            raise ValueError(f"acts must be >= 1, got {self.acts}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


def step_motion(p: Particle, lattice: SpaceLattice) -> MotionStatus:
    """One 'Run' of currentOfJump: move one cell, or report the motion completed."""
    if p.jump_cursor == 0:
        p.motion_completed = True
        return MotionStatus.COMPLETED
    destination = lattice.neighbor(p.position, p.direction)
    lattice.relocate(p.pid, p.position, destination)
    p.position = destination
    p.jump_cursor -= 1
    return MotionStatus.MOVED


def reset(p: Particle, count_proper_tick: bool = True) -> Particle:
    """Refill currentOfJump from headOfJump; a completed motion earns a proper tick."""
    if count_proper_tick and p.motion_completed:
        p.proper_ticks += 1
    p.jump_cursor = p.momentum
    p.motion_completed = False
    return p


def do_impact(p: Particle, c: Carrier, resolution: int) -> Particle:
    """Lengthen or shorten the jump register by the carrier's acts."""
    if not p.motion_completed or p.jump_cursor > 0:
        raise InteractionForbidden(f"particle {p.pid} is still moving (jump cursor {p.jump_cursor})")
    if p.time_stopped(resolution):
        raise InteractionForbidden(f"particle {p.pid} time is stopped (j={p.momentum} >= tau_R={resolution})")

    for _ in range(c.acts):
        if p.mass_register > 0:
            # rest energy is paid first
            p.mass_register -= 1
        elif c.sign > 0:
            p.momentum += 1
        elif p.momentum > 0:
            p.momentum -= 1
        else:
            p.direction = -p.direction
            p.momentum = 1
    return p


def force_from_intensity(t_i: int, u: UnitSystem, tau_r: int) -> float:
    """f = (1/v_m) * (v_t / tau_R^2) * t_i."""
    if t_i < 0:
        raise ValueError(f"t_i must be non-negative, got {t_i}")
    if tau_r < 1:
        raise ValueError(f"tau_R must be >= 1, got {tau_r}")
    return (1.0 / u.v_m) * (u.v_t / tau_r**2) * t_i


def start_delay(mu: int, t_i: int, tau_r: int) -> Fraction:
    """tau_d = tau_R * mu / t_i, in lab nodes."""
    if t_i < 1:
        raise ValueError(f"t_i must be >= 1, got {t_i}")
    if mu < 0:
        raise ValueError(f"mu must be non-negative, got {mu}")
    return Fraction(tau_r * mu, t_i)
