"""Occupancy grid maps: PGM image + YAML metadata, map-server convention.

Classification follows the usual map-server rule on the occupancy
probability p = (255 - pixel) / 255 (or pixel / 255 when negated):
p >= occupied_thresh -> occupied, p <= free_thresh -> free, else unknown.
Boundary pixels use >= / <= as written.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import MapFormatError
from .pgm import read_pgm, write_pgm


class CellState:
    FREE = 0
    OCCUPIED = 1
    UNKNOWN = -1


# pixel values emitted by save_map; chosen to survive a load round-trip
# with the default thresholds
_PIXEL_OCCUPIED = 0
_PIXEL_FREE = 254
_PIXEL_UNKNOWN = 205

DEFAULT_OCCUPIED_THRESH = 0.65
DEFAULT_FREE_THRESH = 0.196


@dataclass
class OccupancyGrid:
    """Row 0 of `cells` is the *top* image row, i.e. largest world y."""

    cells: np.ndarray  # int8 (H, W) of CellState values
    resolution: float  # m/cell
    origin: np.ndarray = field(default_factory=lambda: np.zeros(3))  # x, y, yaw
    occupied_thresh: float = DEFAULT_OCCUPIED_THRESH
    free_thresh: float = DEFAULT_FREE_THRESH

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.int8)
        self.origin = np.asarray(self.origin, dtype=float)
        if self.resolution <= 0.0:
            raise MapFormatError(f"resolution must be > 0, got {self.resolution}")
        if self.cells.ndim != 2 or min(self.cells.shape) < 1:
            raise MapFormatError("grid dimensions must be >= 1")

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        """Cell (row, col) containing a world point; may be out of bounds."""
        col = int(np.floor((x - self.origin[0]) / self.resolution))
        row = self.height - 1 - int(np.floor((y - self.origin[1]) / self.resolution))
        return row, col

    def cell_to_world(self, row: int, col: int) -> tuple[float, float]:
        """World coordinates of a cell centre."""
        x = self.origin[0] + (col + 0.5) * self.resolution
        y = self.origin[1] + (self.height - row - 0.5) * self.resolution
        return x, y

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.height and 0 <= col < self.width

    def is_occupied(self, row: int, col: int) -> bool:
        return self.in_bounds(row, col) and self.cells[row, col] == CellState.OCCUPIED

    def __eq__(self, other) -> bool:
        if not isinstance(other, OccupancyGrid):
            return NotImplemented
        return (np.array_equal(self.cells, other.cells)
                and self.resolution == other.resolution
                and np.array_equal(self.origin, other.origin))


def _classify(pixels: np.ndarray, negate: bool, occupied_thresh: float,
              free_thresh: float) -> np.ndarray:
    p = pixels.astype(float) / 255.0 if negate else (255.0 - pixels) / 255.0
    cells = np.full(pixels.shape, CellState.UNKNOWN, dtype=np.int8)
    cells[p >= occupied_thresh] = CellState.OCCUPIED
    cells[p <= free_thresh] = CellState.FREE
    return cells


def load_map(metadata_path: str | Path) -> OccupancyGrid:
    """Load an occupancy grid from a YAML metadata file + PGM image."""
    metadata_path = Path(metadata_path)
    try:
        meta = yaml.safe_load(metadata_path.read_text())
    except yaml.YAMLError as err:
        raise MapFormatError(f"{metadata_path}: invalid YAML: {err}") from err
    if not isinstance(meta, dict):
        raise MapFormatError(f"{metadata_path}: metadata must be a mapping")
    for key in ("image", "resolution", "origin"):
        if key not in meta:
            raise MapFormatError(f"{metadata_path}: missing field '{key}'")
    resolution = float(meta["resolution"])
    if resolution <= 0.0:
        raise MapFormatError(
            f"{metadata_path}: field 'resolution' must be > 0, got {resolution}")
    origin = np.asarray(meta["origin"], dtype=float)
    if origin.shape != (3,):
        raise MapFormatError(f"{metadata_path}: field 'origin' must be [x, y, yaw]")
    image_path = metadata_path.parent / str(meta["image"])
    pixels = read_pgm(image_path)
    if pixels.dtype != np.uint8:
        raise MapFormatError(f"{image_path}: occupancy maps must be 8-bit")
    occupied_thresh = float(meta.get("occupied_thresh", DEFAULT_OCCUPIED_THRESH))
    free_thresh = float(meta.get("free_thresh", DEFAULT_FREE_THRESH))
    cells = _classify(pixels, bool(meta.get("negate", 0)),
                      occupied_thresh, free_thresh)
    return OccupancyGrid(cells=cells, resolution=resolution, origin=origin,
                         occupied_thresh=occupied_thresh, free_thresh=free_thresh)


def save_map(grid: OccupancyGrid, metadata_path: str | Path) -> None:
    """Write the grid as PGM + YAML; load_map(save_map(g)) == g."""
    metadata_path = Path(metadata_path)
    image_path = metadata_path.with_suffix(".pgm")
    pixels = np.full(grid.cells.shape, _PIXEL_UNKNOWN, dtype=np.uint8)
    pixels[grid.cells == CellState.OCCUPIED] = _PIXEL_OCCUPIED
    pixels[grid.cells == CellState.FREE] = _PIXEL_FREE
    write_pgm(image_path, pixels)
    meta = {
        "image": image_path.name,
        "resolution": float(grid.resolution),
        "origin": [float(v) for v in grid.origin],
        "negate": 0,
        "occupied_thresh": float(grid.occupied_thresh),
        "free_thresh": float(grid.free_thresh),
    }
    metadata_path.write_text(yaml.safe_dump(meta, sort_keys=False))
