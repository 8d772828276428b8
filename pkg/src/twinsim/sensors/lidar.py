"""2-D and 3-D LIDAR: iterative ray-casting over the scene.

Ranges below r_min or beyond r_max report as infinity. Binary logs
encode infinity as the literal value r_max + 1 so the blob stays pure
float32; the wire protocol uses null instead.

3-D scans sweep a (phi, theta) lattice; positive phi pitches the ray
downward. Rays within a scan are independent, so a scan may be chunked
across worker threads, with the output order fixed by the lattice.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError
from ..transforms import Transform

SCAN_MAGIC = b"TWSC"
CLOUD_MAGIC = b"TWPC"


def _ray_count(lo: float, hi: float, res: float) -> int:
    return int(math.floor((hi - lo) / res + 1e-9)) + 1


@dataclass(frozen=True)
class Lidar2dParams:
    r_min: float
    r_max: float
    theta_min: float = -math.pi
    theta_max: float = math.pi
    theta_res: float = math.radians(1.0)
    rate: float = 10.0
    noise_sigma: float = 0.0
    mount: Transform = field(default_factory=Transform)

    def __post_init__(self):
        if not 0.0 <= self.r_min < self.r_max:
            raise InvalidParameterError("lidar needs 0 <= r_min < r_max")
        if self.theta_res <= 0.0:
            raise InvalidParameterError("lidar theta_res must be > 0")

    @property
    def beam_count(self) -> int:
        return _ray_count(self.theta_min, self.theta_max, self.theta_res)

    @property
    def angles(self) -> np.ndarray:
        return self.theta_min + self.theta_res * np.arange(self.beam_count)


@dataclass(frozen=True)
class Lidar3dParams(Lidar2dParams):
    phi_min: float = math.radians(-15.0)
    phi_max: float = math.radians(15.0)
    phi_res: float = math.radians(2.0)

    def __post_init__(self):
        super().__post_init__()
        if self.phi_res <= 0.0:
            raise InvalidParameterError("lidar phi_res must be > 0")

    @property
    def channel_count(self) -> int:
        return _ray_count(self.phi_min, self.phi_max, self.phi_res)

    @property
    def channels(self) -> np.ndarray:
        return self.phi_min + self.phi_res * np.arange(self.channel_count)


def _cast(scene, world_pose: Transform, direction_local: np.ndarray,
          r_min: float, r_max: float) -> float:
    direction = world_pose.rotation @ direction_local
    hit = scene.raycast(world_pose.translation, direction, r_max)
    if hit is None or hit.distance < r_min:
        return math.inf
    return hit.distance


def lidar2d_scan(scene, world_pose: Transform, params: Lidar2dParams,
                 rng: np.random.Generator | None = None) -> np.ndarray:
    """Planar scan; ranges ordered by increasing theta, misses = inf."""
    ranges = np.empty(params.beam_count)
    for i, theta in enumerate(params.angles):
        d = np.array([math.cos(theta), math.sin(theta), 0.0])
        ranges[i] = _cast(scene, world_pose, d, params.r_min, params.r_max)
    if params.noise_sigma > 0.0 and rng is not None:
        finite = np.isfinite(ranges)
        ranges[finite] += rng.normal(0.0, params.noise_sigma, int(finite.sum()))
    return ranges


def _scan_channel(scene, world_pose: Transform, params: Lidar3dParams,
                  phi: float) -> list[np.ndarray]:
    points = []
    cp, sp = math.cos(phi), math.sin(phi)
    for theta in params.angles:
        d = np.array([math.cos(theta) * cp, math.sin(theta) * cp, -sp])
        r = _cast(scene, world_pose, d, params.r_min, params.r_max)
        if math.isfinite(r):
            points.append(r * d)
    return points


def lidar3d_scan(scene, world_pose: Transform, params: Lidar3dParams,
                 workers: int = 1) -> np.ndarray:
    """Multi-channel scan; returns hit points (N, 3) in the sensor frame.

    Output order is (phi-major, theta-minor) regardless of worker count.
    """
    phis = list(params.channels)
    if workers <= 1:
        per_channel = [_scan_channel(scene, world_pose, params, phi)
                       for phi in phis]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_channel = list(pool.map(
                lambda phi: _scan_channel(scene, world_pose, params, phi),
                phis))
    flat = [p for channel in per_channel for p in channel]
    if not flat:
        return np.zeros((0, 3))
    return np.array(flat)


# -- binary serialization ---------------------------------------------


def encode_scan(ranges: np.ndarray, params: Lidar2dParams,
                frame_id: int) -> bytes:
    """Header (magic, count, frame id) + little-endian float32 ranges;
    infinity stored as r_max + 1."""
    clipped = np.where(np.isfinite(ranges), ranges, params.r_max + 1.0)
    header = SCAN_MAGIC + struct.pack("<II", len(ranges), frame_id)
    return header + clipped.astype("<f4").tobytes()


def decode_scan(blob: bytes, params: Lidar2dParams) -> tuple[np.ndarray, int]:
    if blob[:4] != SCAN_MAGIC:
        raise InvalidParameterError("bad scan magic")
    count, frame_id = struct.unpack_from("<II", blob, 4)
    ranges = np.frombuffer(blob, dtype="<f4", count=count, offset=12).astype(float)
    ranges = np.where(ranges > params.r_max, np.inf, ranges)
    return ranges, frame_id


def encode_cloud(points: np.ndarray, frame_id: int) -> bytes:
    header = CLOUD_MAGIC + struct.pack("<II", len(points), frame_id)
    return header + np.asarray(points, dtype="<f4").tobytes()


def decode_cloud(blob: bytes) -> tuple[np.ndarray, int]:
    if blob[:4] != CLOUD_MAGIC:
        raise InvalidParameterError("bad cloud magic")
    count, frame_id = struct.unpack_from("<II", blob, 4)
    points = np.frombuffer(blob, dtype="<f4", count=count * 3, offset=12)
    return points.reshape(count, 3).astype(float), frame_id
