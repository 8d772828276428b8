"""Brake models: idle-holding torque (small/mid scale) and disc brakes
sized from a 60 MPH braking-distance test (full scale)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError

# throttle magnitude below which the idle-hold brake engages
IDLE_THROTTLE = 0.05
# wheel speed below which an idle-held wheel latches to zero, rad/s
EPS_OMEGA = 0.5


@dataclass
class IdleHoldBrake:
    hold_torque: float  # N*m

    def __post_init__(self):
        if self.hold_torque <= 0:
            raise InvalidParameterError("hold torque must be > 0")


@dataclass
class DiscBrake:
    disk_radius: float            # m
    braking_distance_60mph: float  # m

    def __post_init__(self):
        if self.disk_radius <= 0 or self.braking_distance_60mph <= 0:
            raise InvalidParameterError("disc brake parameters must be > 0")


BrakeParams = IdleHoldBrake | DiscBrake


def brake_torque(brake_input: float, handbrake: bool, throttle: float, v: float,
                 corner_masses: np.ndarray, params: BrakeParams) -> np.ndarray:
    """Per-wheel brake torque magnitudes [FL, FR, RL, RR].

    The caller applies the torque against the wheel's spin direction.
    Disc brakes follow tau_i = (M_i * v^2 / (2*D_brake)) * R_b scaled by the
    brake input; combi-brakes act on all wheels, the handbrake on the rear
    wheels only. Idle-hold brakes apply a constant holding torque whenever
    the throttle is idle.
    """
    out = np.zeros(4)
    if isinstance(params, IdleHoldBrake):
        if abs(throttle) < IDLE_THROTTLE or brake_input > 0 or handbrake:
            out[:] = params.hold_torque
        return out

    per_corner = corner_masses * v * v / (2.0 * params.braking_distance_60mph) \
        * params.disk_radius
    out = per_corner * max(0.0, min(1.0, brake_input))
    if handbrake:
        hand = per_corner.copy()
        hand[:2] = 0.0
        out = np.maximum(out, hand)
    return out
