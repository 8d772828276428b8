"""Terrain elevation grids with bilinear ground queries.

Stored as 16-bit PGM + YAML metadata (z_scale maps the full pixel range
onto metres). Row 0 is the top image row (largest world y), matching the
occupancy-grid convention.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import MapFormatError
from .pgm import read_pgm, write_pgm


@dataclass
class Heightmap:
    elevations: np.ndarray  # float (H, W), metres; sample points at cell centres
    resolution: float  # m/cell
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))  # x, y
    friction: np.ndarray | None = None  # per-cell scale in (0, 2]; default 1

    def __post_init__(self):
        self.elevations = np.asarray(self.elevations, dtype=float)
        self.origin = np.asarray(self.origin, dtype=float)
        if self.resolution <= 0.0:
            raise MapFormatError(f"resolution must be > 0, got {self.resolution}")
        if not np.all(np.isfinite(self.elevations)):
            raise MapFormatError("heightmap elevations must be finite")
        if self.friction is None:
            self.friction = np.ones_like(self.elevations)
        else:
            self.friction = np.asarray(self.friction, dtype=float)
            if np.any(self.friction <= 0.0) or np.any(self.friction > 2.0):
                raise MapFormatError("friction scale must lie in (0, 2]")

    @property
    def height(self) -> int:
        return self.elevations.shape[0]

    @property
    def width(self) -> int:
        return self.elevations.shape[1]

    def _fractional_index(self, x: float, y: float) -> tuple[float, float]:
        # continuous (row, col) with sample points at cell centres
        col = (x - self.origin[0]) / self.resolution - 0.5
        row = self.height - 1 - ((y - self.origin[1]) / self.resolution - 0.5)
        return row, col

    def elevation_at(self, x: float, y: float) -> float:
        """Bilinearly interpolated elevation; clamped at the borders."""
        row, col = self._fractional_index(x, y)
        r0 = int(np.clip(np.floor(row), 0, self.height - 2)) if self.height > 1 else 0
        c0 = int(np.clip(np.floor(col), 0, self.width - 2)) if self.width > 1 else 0
        fr = float(np.clip(row - r0, 0.0, 1.0))
        fc = float(np.clip(col - c0, 0.0, 1.0))
        e = self.elevations
        r1 = min(r0 + 1, self.height - 1)
        c1 = min(c0 + 1, self.width - 1)
        top = e[r0, c0] * (1 - fc) + e[r0, c1] * fc
        bot = e[r1, c0] * (1 - fc) + e[r1, c1] * fc
        return float(top * (1 - fr) + bot * fr)

    def ground_query(self, x: float, y: float) -> tuple[float, np.ndarray, float]:
        """(elevation, unit surface normal, friction scale) at a world point."""
        z = self.elevation_at(x, y)
        # gradient by central differences of the interpolated surface
        h = 0.5 * self.resolution
        dzdx = (self.elevation_at(x + h, y) - self.elevation_at(x - h, y)) / (2 * h)
        dzdy = (self.elevation_at(x, y + h) - self.elevation_at(x, y - h)) / (2 * h)
        normal = np.array([-dzdx, -dzdy, 1.0])
        normal /= np.linalg.norm(normal)
        row, col = self._fractional_index(x, y)
        r = int(np.clip(round(row), 0, self.height - 1))
        c = int(np.clip(round(col), 0, self.width - 1))
        return z, normal, float(self.friction[r, c])


def load_heightmap(metadata_path: str | Path) -> Heightmap:
    metadata_path = Path(metadata_path)
    try:
        meta = yaml.safe_load(metadata_path.read_text())
    except yaml.YAMLError as err:
        raise MapFormatError(f"{metadata_path}: invalid YAML: {err}") from err
    if not isinstance(meta, dict):
        raise MapFormatError(f"{metadata_path}: metadata must be a mapping")
    for key in ("image", "resolution", "z_scale"):
        if key not in meta:
            raise MapFormatError(f"{metadata_path}: missing field '{key}'")
    resolution = float(meta["resolution"])
    if resolution <= 0.0:
        raise MapFormatError(
            f"{metadata_path}: field 'resolution' must be > 0, got {resolution}")
    pixels = read_pgm(metadata_path.parent / str(meta["image"]))
    z_scale = float(meta["z_scale"])
    z_offset = float(meta.get("z_offset", 0.0))
    elevations = pixels.astype(float) / 65535.0 * z_scale + z_offset
    origin = np.asarray(meta.get("origin", [0.0, 0.0]), dtype=float)
    return Heightmap(elevations=elevations, resolution=resolution, origin=origin)


def save_heightmap(hm: Heightmap, metadata_path: str | Path,
                   z_scale: float | None = None) -> None:
    metadata_path = Path(metadata_path)
    image_path = metadata_path.with_suffix(".pgm")
    z_offset = float(hm.elevations.min())
    span = float(hm.elevations.max() - z_offset)
    z_scale = span if z_scale is None else z_scale
    if z_scale <= 0.0:
        z_scale = 1.0
    quantized = np.round((hm.elevations - z_offset) / z_scale * 65535.0)
    write_pgm(image_path, np.clip(quantized, 0, 65535).astype(np.uint16))
    meta = {
        "image": image_path.name,
        "resolution": float(hm.resolution),
        "origin": [float(v) for v in hm.origin],
        "z_scale": z_scale,
        "z_offset": z_offset,
    }
    metadata_path.write_text(yaml.safe_dump(meta, sort_keys=False))
