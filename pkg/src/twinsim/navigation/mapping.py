"""Log-odds occupancy mapping from planar LIDAR scans."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..environment.grid import CellState, OccupancyGrid
from ..errors import InvalidParameterError


@dataclass(frozen=True)
class MappingParams:
    p_hit: float = 0.7
    p_miss: float = 0.4
    clamp: float = 5.0

    def __post_init__(self):
        if not 0.5 < self.p_hit < 1.0 or not 0.0 < self.p_miss < 0.5:
            raise InvalidParameterError(
                "mapping needs p_hit in (0.5, 1) and p_miss in (0, 0.5)")

    @property
    def l_occ(self) -> float:
        return math.log(self.p_hit / (1.0 - self.p_hit))

    @property
    def l_free(self) -> float:
        return math.log(self.p_miss / (1.0 - self.p_miss))


def _bresenham(r0: int, c0: int, r1: int, c1: int) -> list[tuple[int, int]]:
    """Integer line from (r0, c0) to (r1, c1), endpoints included."""
    cells = []
    dr = abs(r1 - r0)
    dc = abs(c1 - c0)
    sr = 1 if r1 >= r0 else -1
    sc = 1 if c1 >= c0 else -1
    err = dc - dr
    r, c = r0, c0
    while True:
        cells.append((r, c))
        if r == r1 and c == c1:
            break
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr
    return cells


class OccupancyMapper:
    """Accumulates scans into a log-odds grid over a fixed extent."""

    def __init__(self, width: int, height: int, resolution: float,
                 origin: np.ndarray, params: MappingParams | None = None):
        self.params = params or MappingParams()
        self.log_odds = np.zeros((height, width))
        # geometry helper grid; the cells array is regenerated on demand
        self._geom = OccupancyGrid(
            cells=np.full((height, width), CellState.UNKNOWN, dtype=np.int8),
            resolution=resolution, origin=np.asarray(origin, float))

    @property
    def resolution(self) -> float:
        return self._geom.resolution

    def update(self, ranges: np.ndarray, angles: np.ndarray,
               sensor_x: float, sensor_y: float, sensor_yaw: float,
               r_max: float) -> None:
        """Integrate one scan taken at a planar sensor pose.

        Beams are processed in index order so repeated runs are
        bit-identical. Infinite beams carve free space out to r_max.
        """
        p = self.params
        g = self._geom
        r0, c0 = g.world_to_cell(sensor_x, sensor_y)
        for rng, ang in zip(ranges, angles):
            hit = math.isfinite(rng)
            reach = rng if hit else r_max
            cos_a = math.cos(sensor_yaw + ang)
            sin_a = math.sin(sensor_yaw + ang)
            # push the endpoint a quarter cell along the beam so a return
            # from a cell face registers inside the occupied cell
            push = 0.25 * g.resolution if hit else 0.0
            ex = sensor_x + (reach + push) * cos_a
            ey = sensor_y + (reach + push) * sin_a
            r1, c1 = g.world_to_cell(ex, ey)
            cells = _bresenham(r0, c0, r1, c1)
            for r, c in cells[:-1]:
                if g.in_bounds(r, c):
                    self.log_odds[r, c] += p.l_free
            r, c = cells[-1]
            if g.in_bounds(r, c):
                self.log_odds[r, c] += p.l_occ if hit else p.l_free
        np.clip(self.log_odds, -p.clamp, p.clamp, out=self.log_odds)

    def to_grid(self) -> OccupancyGrid:
        """Classify: positive log-odds occupied, negative free, zero unknown."""
        cells = np.full(self.log_odds.shape, CellState.UNKNOWN, dtype=np.int8)
        cells[self.log_odds > 0.0] = CellState.OCCUPIED
        cells[self.log_odds < 0.0] = CellState.FREE
        return OccupancyGrid(cells=cells, resolution=self._geom.resolution,
                             origin=self._geom.origin.copy())
