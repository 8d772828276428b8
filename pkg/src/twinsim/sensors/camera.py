"""Pinhole camera model: view/projection matrices and point projection.

The camera looks down its local -z axis (graphics convention); the
projection matrix maps the frustum between the near and far planes to
normalized device coordinates in [-1, 1]^3. No rasterization — the
sensor output is the matrix pair plus projected scene landmarks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError
from ..transforms import Transform


@dataclass(frozen=True)
class CameraParams:
    focal: float  # dimensionless: f = 2N / (R - L)
    sensor_size: tuple[float, float]  # (s_x, s_y), m
    resolution: tuple[int, int]  # (w_px, h_px)
    near: float
    far: float

    def __post_init__(self):
        if not 0.0 < self.near < self.far:
            raise InvalidParameterError("camera needs 0 < near < far")
        if self.focal <= 0.0:
            raise InvalidParameterError("camera focal must be > 0")
        if min(self.sensor_size) <= 0.0 or min(self.resolution) < 1:
            raise InvalidParameterError("camera sensor/resolution must be positive")

    @property
    def aspect(self) -> float:
        return self.sensor_size[1] / self.sensor_size[0]

    @property
    def offsets(self) -> tuple[float, float, float, float]:
        """(L, R, T, B) sensor offsets for a centred sensor."""
        half_w = self.near / self.focal  # from f = 2N / (R - L)
        half_h = half_w * self.aspect  # from f / a = 2N / (T - B)
        return -half_w, half_w, half_h, -half_h


def projection_matrix(params: CameraParams) -> np.ndarray:
    left, right, top, bottom = params.offsets
    n, f = params.near, params.far
    return np.array([
        [2 * n / (right - left), 0.0, (right + left) / (right - left), 0.0],
        [0.0, 2 * n / (top - bottom), (top + bottom) / (top - bottom), 0.0],
        [0.0, 0.0, -(f + n) / (f - n), -2 * f * n / (f - n)],
        [0.0, 0.0, -1.0, 0.0],
    ])


def view_matrix(world_pose: Transform) -> np.ndarray:
    """World-to-camera homogeneous transform (inverse of the camera pose)."""
    return world_pose.inverse().as_matrix()


def camera_matrices(params: CameraParams,
                    world_pose: Transform) -> tuple[np.ndarray, np.ndarray]:
    return view_matrix(world_pose), projection_matrix(params)


def project_points(points: np.ndarray, view: np.ndarray, proj: np.ndarray,
                   resolution: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Project world points to pixel coordinates.

    Returns (pixels (N, 2), visible (N,)); a point is visible when its
    clip-space w is positive and its NDC lies inside the unit cube.
    Pixel origin is the top-left image corner.
    """
    points = np.atleast_2d(np.asarray(points, float))
    n = len(points)
    homo = np.hstack([points, np.ones((n, 1))])
    clip = (proj @ view @ homo.T).T
    w = clip[:, 3]
    visible = w > 1e-12
    ndc = np.zeros((n, 3))
    safe_w = np.where(visible, w, 1.0)
    ndc[visible] = (clip[:, :3] / safe_w[:, None])[visible]
    visible &= np.all(np.abs(ndc) <= 1.0 + 1e-12, axis=1)
    w_px, h_px = resolution
    pixels = np.column_stack([
        (ndc[:, 0] + 1.0) * 0.5 * w_px,
        (1.0 - ndc[:, 1]) * 0.5 * h_px,
    ])
    return pixels, visible
