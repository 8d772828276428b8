"""Waypoint trajectories: recording, file I/O, feasibility lint."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import InvalidParameterError, NoPathError


@dataclass
class Trajectory:
    """Ordered (x, y, target speed) waypoints in the map frame."""

    waypoints: np.ndarray  # (N, 3)
    spacing: float  # recording threshold, m
    loop: bool = False

    def __post_init__(self):
        self.waypoints = np.atleast_2d(np.asarray(self.waypoints, float))
        if self.spacing <= 0.0:
            raise InvalidParameterError(
                f"waypoint spacing must be > 0, got {self.spacing}")

    def __len__(self) -> int:
        return len(self.waypoints)

    def segment_lengths(self) -> np.ndarray:
        pts = self.waypoints[:, :2]
        if self.loop:
            pts = np.vstack([pts, pts[:1]])
        return np.linalg.norm(np.diff(pts, axis=0), axis=1)


@dataclass
class WaypointRecorder:
    """Streams poses in; keeps those at least `threshold` apart."""

    threshold: float
    _points: list[tuple[float, float, float]] = field(default_factory=list)

    def __post_init__(self):
        if self.threshold <= 0.0:
            raise InvalidParameterError(
                f"waypoint spacing must be > 0, got {self.threshold}")

    def push(self, x: float, y: float, speed: float) -> bool:
        """Returns True when the pose was recorded."""
        if self._points:
            lx, ly, _ = self._points[-1]
            if math.hypot(x - lx, y - ly) < self.threshold:
                return False
        self._points.append((x, y, speed))
        return True

    @property
    def count(self) -> int:
        return len(self._points)

    @property
    def first(self) -> tuple[float, float, float] | None:
        return self._points[0] if self._points else None

    def finish(self, loop: bool = False) -> Trajectory:
        if not self._points:
            raise NoPathError("no poses recorded")
        return Trajectory(waypoints=np.array(self._points),
                          spacing=self.threshold, loop=loop)


def save_trajectory(traj: Trajectory, path: str | Path) -> None:
    lines = [f"# spacing {traj.spacing} loop {int(traj.loop)}"]
    lines += [f"{x:.9f} {y:.9f} {v:.9f}" for x, y, v in traj.waypoints]
    Path(path).write_text("\n".join(lines) + "\n")


def load_trajectory(path: str | Path) -> Trajectory:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise InvalidParameterError(f"{path}: missing trajectory header")
    header = lines[0].split()
    spacing = float(header[2])
    loop = bool(int(header[4]))
    points = [tuple(float(v) for v in line.split()) for line in lines[1:] if line]
    if not points:
        raise NoPathError(f"{path}: trajectory has no waypoints")
    return Trajectory(waypoints=np.array(points), spacing=spacing, loop=loop)


def check_feasibility(traj: Trajectory, wheelbase: float,
                      steering_limit: float) -> bool:
    """Kinodynamic lint: discrete path curvature must stay achievable,
    max |kappa| <= tan(delta_lim) / wheelbase."""
    pts = traj.waypoints[:, :2]
    if traj.loop:
        pts = np.vstack([pts, pts[:2]])
    if len(pts) < 3:
        return True
    kappa_max = math.tan(steering_limit) / wheelbase
    for a, b, c in zip(pts, pts[1:], pts[2:]):
        # Menger curvature of the waypoint triple
        area2 = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
        d_ab = np.linalg.norm(b - a)
        d_bc = np.linalg.norm(c - b)
        d_ca = np.linalg.norm(c - a)
        if d_ab * d_bc * d_ca < 1e-12:
            continue
        if 2.0 * area2 / (d_ab * d_bc * d_ca) > kappa_max:
            return False
    return True
