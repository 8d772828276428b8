"""Aerodynamic drag and downforce models."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError


@dataclass
class ConstantAero:
    """Small/mid scale: drag proportional to linear/angular velocity."""

    linear_drag: float   # F_d, N*s/m
    angular_drag: float  # T_d, N*m*s/rad

    def __post_init__(self):
        if self.linear_drag < 0 or self.angular_drag < 0:
            raise InvalidParameterError("drag coefficients must be >= 0")


@dataclass
class CasedAero:
    """Full scale: case-based drag magnitude plus speed-proportional downforce."""

    f_d_max: float
    f_d_idle: float
    f_d_rev: float
    v_max: float
    v_rev: float
    downforce_coeff: float = 0.0
    angular_drag: float = 0.0

    def __post_init__(self):
        if min(self.f_d_max, self.f_d_idle, self.f_d_rev, self.downforce_coeff) < 0:
            raise InvalidParameterError("drag coefficients must be >= 0")


AeroParams = ConstantAero | CasedAero


def aero_forces(v_body: np.ndarray, omega: np.ndarray, tau_out: float,
                gear_index: int, avg_wheel_rpm: float,
                params: AeroParams) -> tuple[np.ndarray, np.ndarray, float]:
    """Drag force (body frame), drag torque, and downforce magnitude.

    The full-scale case table is evaluated top-down, first match wins:
    top speed -> max drag; zero output torque -> idle drag; reversing
    -> reverse drag; otherwise idle drag. Drag opposes the motion
    direction.
    """
    v_body = np.asarray(v_body, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if isinstance(params, ConstantAero):
        return -params.linear_drag * v_body, -params.angular_drag * omega, 0.0

    speed = float(np.linalg.norm(v_body))
    if speed >= params.v_max:
        magnitude = params.f_d_max
    elif tau_out == 0.0:
        magnitude = params.f_d_idle
    elif speed >= params.v_rev and gear_index == -1 and avg_wheel_rpm < 0:
        magnitude = params.f_d_rev
    else:
        magnitude = params.f_d_idle

    if speed > 1e-9:
        drag = -magnitude * v_body / speed
    else:
        drag = np.zeros(3)
    torque = -params.angular_drag * omega
    downforce = params.downforce_coeff * speed
    return drag, torque, downforce
