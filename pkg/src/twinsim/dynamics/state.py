"""Vehicle state and actuation command containers."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from ..transforms import Transform
from .powertrain import Gear, PowertrainState
from .suspension import SuspensionState


class ScaleClass(Enum):
    SMALL = "small"
    MID = "mid"
    FULL = "full"


@dataclass
class ActuatorCommand:
    """Driver/autonomy inputs. Out-of-range values are clamped, never rejected."""

    throttle: float = 0.0   # [-1, 1]
    steering: float = 0.0   # [-1, 1], maps to +/- steering limit
    brake: float = 0.0      # [0, 1]
    handbrake: bool = False
    gear_request: Gear | None = None

    def __post_init__(self):
        self.throttle = max(-1.0, min(1.0, float(self.throttle)))
        self.steering = max(-1.0, min(1.0, float(self.steering)))
        self.brake = max(0.0, min(1.0, float(self.brake)))
        self.handbrake = bool(self.handbrake)
        if isinstance(self.gear_request, str):
            self.gear_request = Gear(self.gear_request.lower())


@dataclass
class VehicleState:
    """The single integrated state advanced each tick."""

    pose: Transform = field(default_factory=Transform)
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))  # body frame
    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))     # body frame
    wheel_speeds: np.ndarray = field(default_factory=lambda: np.zeros(4))  # rad/s
    wheel_revs: np.ndarray = field(default_factory=lambda: np.zeros(4))    # cumulative
    steering: float = 0.0   # applied central steering angle, rad
    applied_throttle: float = 0.0
    applied_brake: float = 0.0
    powertrain: PowertrainState = field(default_factory=PowertrainState)
    suspension: SuspensionState = field(default_factory=SuspensionState)
    tick: int = 0
    collided: bool = False

    def copy(self) -> "VehicleState":
        return replace(
            self,
            pose=self.pose.copy(),
            velocity=self.velocity.copy(),
            omega=self.omega.copy(),
            wheel_speeds=self.wheel_speeds.copy(),
            wheel_revs=self.wheel_revs.copy(),
            powertrain=replace(self.powertrain),
            suspension=self.suspension.copy(),
        )
