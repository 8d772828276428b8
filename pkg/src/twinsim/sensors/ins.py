"""Inertial navigation sensor: pose, twist, and specific force.

The accelerometer reports specific force (gravity included), so a
stationary sensor reads +g on its z axis. Linear acceleration comes
from central-differencing the pose history over the fixed timestep;
angular velocity from the relative rotation across the same window, so
integrating the reported rates reproduces the orientation.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError
from ..transforms import Transform, matrix_to_euler, matrix_to_quat

GRAVITY = np.array([0.0, 0.0, -9.81])


@dataclass(frozen=True)
class InsParams:
    accel_sigma: float = 0.0  # m/s^2, zero-mean Gaussian per sample
    gyro_sigma: float = 0.0  # rad/s
    accel_bias: tuple[float, float, float] = (0.0, 0.0, 0.0)
    gyro_bias: tuple[float, float, float] = (0.0, 0.0, 0.0)
    seed: int = 0

    def __post_init__(self):
        if self.accel_sigma < 0.0 or self.gyro_sigma < 0.0:
            raise InvalidParameterError("noise sigma must be >= 0")


@dataclass
class InsSample:
    position: np.ndarray
    euler: np.ndarray  # roll, pitch, yaw (x, y, z), rad
    quaternion: np.ndarray  # scalar-first, unit norm
    linear_acceleration: np.ndarray  # body frame, specific force, m/s^2
    angular_velocity: np.ndarray  # body frame, rad/s
    timestamp: float = 0.0


def _log_so3(r: np.ndarray) -> np.ndarray:
    """Rotation-vector logarithm of a rotation matrix."""
    cos_angle = np.clip((np.trace(r) - 1.0) / 2.0, -1.0, 1.0)
    angle = float(np.arccos(cos_angle))
    if angle < 1e-12:
        return np.zeros(3)
    axis = np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    return axis * angle / (2.0 * np.sin(angle))


@dataclass
class InsSensor:
    """Stateful wrapper keeping the three-deep pose history and RNG."""

    dt: float
    params: InsParams = field(default_factory=InsParams)

    def __post_init__(self):
        self._history: deque[Transform] = deque(maxlen=3)
        self._rng = np.random.default_rng(self.params.seed)

    def sample(self, pose: Transform, timestamp: float = 0.0) -> InsSample:
        self._history.append(pose.copy())
        r = pose.rotation
        accel_world = np.zeros(3)
        omega_body = np.zeros(3)
        if len(self._history) == 3:
            p0, p1, p2 = self._history
            accel_world = (p2.translation - 2.0 * p1.translation
                           + p0.translation) / (self.dt * self.dt)
            # mid-window body rate from the relative rotation p0 -> p2
            omega_body = _log_so3(p0.rotation.T @ p2.rotation) / (2.0 * self.dt)
        specific_force = r.T @ (accel_world - GRAVITY)
        p = self.params
        if p.accel_sigma > 0.0:
            specific_force = specific_force + self._rng.normal(
                0.0, p.accel_sigma, 3)
        if p.gyro_sigma > 0.0:
            omega_body = omega_body + self._rng.normal(0.0, p.gyro_sigma, 3)
        specific_force = specific_force + np.asarray(p.accel_bias)
        omega_body = omega_body + np.asarray(p.gyro_bias)
        return InsSample(
            position=pose.translation.copy(),
            euler=np.array(matrix_to_euler(r)),
            quaternion=matrix_to_quat(r),
            linear_acceleration=specific_force,
            angular_velocity=omega_body,
            timestamp=timestamp,
        )

    def reset(self) -> None:
        self._history.clear()
        self._rng = np.random.default_rng(self.params.seed)
