"""Steering rate limiting and Ackermann wheel-angle geometry."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidGeometryError, InvalidParameterError

_DENOM_EPS = 1e-9


@dataclass
class SteeringParams:
    limit: float        # rad, +/- saturation
    sensitivity: float  # rad/s, base slew rate
    speed_factor: float  # rad/s, speed-proportional slew contribution
    vmax: float         # m/s, speed normalization for the slew law

    def __post_init__(self):
        if self.limit <= 0:
            raise InvalidParameterError("steering limit must be > 0")
        if self.vmax <= 0:
            raise InvalidParameterError("steering vmax must be > 0")


def steering_step(delta: float, command: float, v: float, dt: float,
                  params: SteeringParams) -> float:
    """Slew the steering angle toward command*limit without overshoot.

    Slew rate grows with speed: rate = sensitivity + speed_factor*|v|/vmax.
    """
    target = max(-1.0, min(1.0, command)) * params.limit
    rate = params.sensitivity + params.speed_factor * abs(v) / params.vmax
    max_step = rate * dt
    err = target - delta
    if abs(err) <= max_step:
        delta = target
    else:
        delta += math.copysign(max_step, err)
    return max(-params.limit, min(params.limit, delta))


def ackermann_angles(delta: float, wheelbase: float, track: float) -> tuple[float, float]:
    """Left/right wheel angles for a central steering angle.

    For delta > 0 (left turn) the right wheel is the inner wheel and turns
    more; the pair mirrors under sign flip.
    """
    t = math.tan(delta)
    denom_l = 2.0 * wheelbase + track * t
    denom_r = 2.0 * wheelbase - track * t
    if abs(denom_l) < _DENOM_EPS or abs(denom_r) < _DENOM_EPS:
        raise InvalidGeometryError("degenerate Ackermann geometry")
    delta_l = math.atan(2.0 * wheelbase * t / denom_l)
    delta_r = math.atan(2.0 * wheelbase * t / denom_r)
    return delta_l, delta_r
