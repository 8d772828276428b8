"""Per-corner spring-damper suspension with optional anti-roll bars.

Corner order everywhere is [FL, FR, RL, RR]. Sprung displacement Z and
unsprung displacement z are measured relative to the static equilibrium,
so the all-zero state carries no dynamic force.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError

G = 9.81


@dataclass
class SuspensionParams:
    corner_masses: np.ndarray               # sprung mass per corner, kg
    stiffness: np.ndarray | None = None     # K per corner, N/m
    damping: np.ndarray | None = None       # B per corner, N*s/m
    natural_freq: np.ndarray | None = None  # rad/s (full scale: K, B derived)
    damping_ratio: np.ndarray | None = None
    equilibrium: float = 0.05               # Z_0, m
    force_offset: float = 0.0               # Z_f, m
    antiroll_stiffness: float = 0.0         # K_r, N/m (0 disables)

    def __post_init__(self):
        self.corner_masses = np.asarray(self.corner_masses, dtype=float)
        if self.stiffness is None:
            if self.natural_freq is None or self.damping_ratio is None:
                raise InvalidParameterError(
                    "suspension needs stiffness/damping or natural_freq/damping_ratio")
            wn = np.asarray(self.natural_freq, dtype=float)
            zeta = np.asarray(self.damping_ratio, dtype=float)
            self.stiffness = self.corner_masses * wn ** 2
            self.damping = 2.0 * zeta * np.sqrt(self.stiffness * self.corner_masses)
        self.stiffness = np.broadcast_to(np.asarray(self.stiffness, dtype=float), (4,)).copy()
        self.damping = np.broadcast_to(np.asarray(self.damping, dtype=float), (4,)).copy()
        if np.any(self.stiffness <= 0) or np.any(self.damping <= 0):
            raise InvalidParameterError("suspension stiffness and damping must be > 0")


@dataclass
class SuspensionState:
    sprung_disp: np.ndarray = field(default_factory=lambda: np.zeros(4))     # Z
    sprung_vel: np.ndarray = field(default_factory=lambda: np.zeros(4))      # Z-dot
    unsprung_disp: np.ndarray = field(default_factory=lambda: np.zeros(4))   # z
    unsprung_vel: np.ndarray = field(default_factory=lambda: np.zeros(4))    # z-dot
    travel_ratio: np.ndarray = field(default_factory=lambda: np.zeros(4))    # Z_s
    contact_height: np.ndarray = field(default_factory=lambda: np.zeros(4))  # Z_c
    grounded: np.ndarray = field(default_factory=lambda: np.ones(4, dtype=bool))

    def copy(self) -> "SuspensionState":
        return SuspensionState(*(getattr(self, f).copy() for f in (
            "sprung_disp", "sprung_vel", "unsprung_disp", "unsprung_vel",
            "travel_ratio", "contact_height", "grounded")))


def suspension_forces(state: SuspensionState, params: SuspensionParams,
                      com_height: float, mount_offset: float, wheel_radius: float,
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Spring-damper force per corner plus the force application height.

    Force is K*(z - Z) + B*(z-dot - Z-dot): positive pushes the sprung mass
    up when the corner is compressed. Airborne corners carry no force.
    Also refreshes the reported travel ratio Z_s.
    """
    force = params.stiffness * (state.unsprung_disp - state.sprung_disp) \
        + params.damping * (state.unsprung_vel - state.sprung_vel)
    force = np.where(state.grounded, force, 0.0)
    z_f = com_height - mount_offset + wheel_radius - params.force_offset
    state.travel_ratio = params.corner_masses * G / (params.equilibrium * params.stiffness)
    return force, np.full(4, z_f)


def advance_suspension(state: SuspensionState, params: SuspensionParams,
                       ground_disp: np.ndarray, dt: float) -> None:
    """Semi-implicit step of the per-corner quarter-car sprung dynamics.

    The rigid wheel follows the ground while grounded, so the unsprung
    displacement tracks ground_disp (deviation from the reference plane).
    """
    ground_disp = np.asarray(ground_disp, dtype=float)
    new_unsprung_vel = (ground_disp - state.unsprung_disp) / dt
    state.unsprung_vel = np.where(state.grounded, new_unsprung_vel, state.unsprung_vel)
    state.unsprung_disp = np.where(state.grounded, ground_disp, state.unsprung_disp)

    accel = (params.stiffness * (state.unsprung_disp - state.sprung_disp)
             + params.damping * (state.unsprung_vel - state.sprung_vel)) / params.corner_masses
    state.sprung_vel = state.sprung_vel + accel * dt
    state.sprung_disp = state.sprung_disp + state.sprung_vel * dt


def antiroll_forces(travel_left: float, travel_right: float,
                    grounded_left: bool, grounded_right: bool,
                    k_r: float) -> tuple[float, float]:
    """Anti-roll bar forces for one axle: equal and opposite, proportional
    to the travel difference; zero unless both wheels are grounded."""
    if not (grounded_left and grounded_right) or k_r == 0.0:
        return 0.0, 0.0
    f_left = k_r * (travel_right - travel_left)
    return f_left, -f_left
