"""Trajectory tracking: pure pursuit steering + PID speed control."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, NoPathError
from .trajectory import Trajectory


@dataclass(frozen=True)
class TrackerConfig:
    lookahead_base: float = 0.6  # m
    lookahead_gain: float = 0.3  # s (multiplies speed)
    pursuit_gain: float = 1.0
    kp: float = 0.5
    ki: float = 0.1
    kd: float = 0.0
    steering_limit: float = math.radians(30.0)
    v_max: float = 2.0
    goal_tolerance: float = 0.2  # m

    def __post_init__(self):
        if self.lookahead_base <= 0.0:
            raise InvalidParameterError("lookahead_base must be > 0")
        if min(self.pursuit_gain, self.kp, self.ki, self.kd) < 0.0:
            raise InvalidParameterError("tracker gains must be >= 0")

    def lookahead(self, speed: float) -> float:
        return self.lookahead_base + self.lookahead_gain * abs(speed)


def nearest_segment(traj: Trajectory, x: float, y: float) -> tuple[int, float, float]:
    """(segment index, parameter t in [0, 1], signed lateral distance).

    The sign is positive when the query point lies left of the segment
    direction. Loop trajectories include the closing segment.
    """
    pts = traj.waypoints[:, :2]
    segs = np.vstack([pts, pts[:1]]) if traj.loop else pts
    if len(segs) < 2:
        raise NoPathError("trajectory needs at least 2 waypoints")
    p = np.array([x, y])
    a = segs[:-1]
    ab = segs[1:] - a
    denom = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.maximum(denom, 1e-18),
                0.0, 1.0)
    t[denom < 1e-18] = 0.0
    offsets = p - (a + t[:, None] * ab)
    dists = np.hypot(offsets[:, 0], offsets[:, 1])
    i = int(np.argmin(dists))
    cross = ab[i, 0] * (p[1] - a[i, 1]) - ab[i, 1] * (p[0] - a[i, 0])
    sign = math.copysign(1.0, cross) if cross else 1.0
    return i, float(t[i]), float(dists[i]) * sign


def cross_track_error(traj: Trajectory, x: float, y: float) -> float:
    """Unsigned distance from a point to the nearest trajectory segment."""
    return abs(nearest_segment(traj, x, y)[2])


def _advance(traj: Trajectory, seg: int, t: float,
             arc: float) -> tuple[np.ndarray, float]:
    """Walk `arc` metres along the path from (seg, t); returns the goal
    point and its interpolated target speed."""
    pts = traj.waypoints
    closed = np.vstack([pts, pts[:1]]) if traj.loop else pts
    n_seg = len(closed) - 1
    i = seg
    pos_t = t
    remaining = arc
    while True:
        a, b = closed[i], closed[i + 1]
        seg_len = float(np.linalg.norm(b[:2] - a[:2]))
        available = seg_len * (1.0 - pos_t)
        if remaining <= available or seg_len < 1e-12:
            frac = pos_t + (remaining / seg_len if seg_len > 1e-12 else 0.0)
            point = a + frac * (b - a)
            return point[:2], float(point[2])
        remaining -= available
        pos_t = 0.0
        i += 1
        if i >= n_seg:
            if traj.loop:
                i = 0
            else:
                return closed[-1][:2], float(closed[-1][2])


def pure_pursuit_steer(x: float, y: float, yaw: float, speed: float,
                       traj: Trajectory, config: TrackerConfig,
                       wheelbase: float) -> tuple[float, float]:
    """Curvature-linearized pure pursuit.

    Returns (steering angle command, target speed at the goal point).
    delta = gain * 2 * l * e_y / L_d^2 with e_y the lateral goal offset
    in the vehicle frame, clamped to the steering limit.
    """
    if len(traj) < 2:
        raise NoPathError("trajectory needs at least 2 waypoints")
    seg, t, _ = nearest_segment(traj, x, y)
    l_d = config.lookahead(speed)
    goal, v_target = _advance(traj, seg, t, l_d)
    dx, dy = goal[0] - x, goal[1] - y
    e_y = -math.sin(yaw) * dx + math.cos(yaw) * dy
    delta = config.pursuit_gain * 2.0 * wheelbase * e_y / (l_d * l_d)
    delta = max(-config.steering_limit, min(config.steering_limit, delta))
    return delta, min(v_target, config.v_max)


def at_goal(traj: Trajectory, x: float, y: float,
            config: TrackerConfig) -> bool:
    """True when a non-loop trajectory's final waypoint has been reached."""
    if traj.loop:
        return False
    gx, gy = traj.waypoints[-1, :2]
    return math.hypot(x - gx, y - gy) <= config.goal_tolerance


@dataclass
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0


def pid_speed(target: float, measured: float, state: PidState, dt: float,
              config: TrackerConfig) -> float:
    """Longitudinal PID; positive output is throttle, negative brake."""
    error = target - measured
    state.integral += error * dt
    if config.ki > 0.0:  # anti-windup: cap the integral's contribution at 1
        limit = 1.0 / config.ki
        state.integral = max(-limit, min(limit, state.integral))
    derivative = (error - state.prev_error) / dt if dt > 0.0 else 0.0
    state.prev_error = error
    out = config.kp * error + config.ki * state.integral + config.kd * derivative
    return max(-1.0, min(1.0, out))
