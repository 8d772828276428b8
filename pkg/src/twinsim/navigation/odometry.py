"""Dead-reckoned odometry fusing wheel encoders with the inertial unit.

Speed comes from encoder tick deltas averaged over the driven wheels;
heading integrates the gyro yaw rate and is pulled toward the absolute
IMU yaw by a complementary filter (weight alpha on the integrated
path).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..sensors.encoder import EncoderParams
from ..sensors.ins import InsSample
from ..transforms import wrap_angle


@dataclass(frozen=True)
class OdometryParams:
    encoder: EncoderParams
    wheel_radius: float
    alpha: float = 0.98  # complementary-filter weight on integrated yaw


@dataclass
class OdometryEstimate:
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0
    drift: float = 0.0  # scalar proxy: accumulated distance since anchor
    timestamp: float = 0.0


def fuse_odometry(tick_deltas: np.ndarray, ins: InsSample,
                  previous: OdometryEstimate, dt: float,
                  params: OdometryParams) -> OdometryEstimate:
    """One fusion step; `tick_deltas` holds this-tick encoder increments
    for each driven wheel."""
    ticks_per_rev = params.encoder.ppr * params.encoder.cgr
    revs = float(np.mean(tick_deltas)) / ticks_per_rev
    distance = revs * 2.0 * math.pi * params.wheel_radius
    v = distance / dt

    yaw_gyro = previous.yaw + float(ins.angular_velocity[2]) * dt
    yaw_abs = float(ins.euler[2])
    yaw = wrap_angle(yaw_gyro + (1.0 - params.alpha) * wrap_angle(yaw_abs - yaw_gyro))

    return OdometryEstimate(
        x=previous.x + v * math.cos(yaw) * dt,
        y=previous.y + v * math.sin(yaw) * dt,
        yaw=yaw,
        drift=previous.drift + abs(distance),
        timestamp=ins.timestamp,
    )
