"""Mapping, waypoint recording, and trajectory tracking."""

from .mapping import MappingParams, OccupancyMapper
from .odometry import OdometryEstimate, OdometryParams, fuse_odometry
from .tracking import PidState, TrackerConfig, pid_speed, pure_pursuit_steer
from .trajectory import (
    Trajectory,
    WaypointRecorder,
    check_feasibility,
    load_trajectory,
    save_trajectory,
)

__all__ = [
    "MappingParams",
    "OccupancyMapper",
    "OdometryEstimate",
    "OdometryParams",
    "PidState",
    "TrackerConfig",
    "Trajectory",
    "WaypointRecorder",
    "check_feasibility",
    "fuse_odometry",
    "load_trajectory",
    "pid_speed",
    "pure_pursuit_steer",
    "save_trajectory",
]
