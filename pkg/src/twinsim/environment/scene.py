"""Scene geometry and ray/ground queries.

A scene combines up to three geometry sources: an occupancy grid whose
occupied cells are extruded into vertical walls, axis-aligned box
obstacles, analytic vertical cylinder walls, and an optional heightmap
terrain. Raycasts return the nearest hit across all sources. The scene
is immutable after construction, so every query is reentrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidGeometryError
from .grid import OccupancyGrid
from .heightmap import Heightmap

_EPS = 1e-12


@dataclass(frozen=True)
class RayHit:
    distance: float
    point: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class Box:
    """Axis-aligned box obstacle, world frame."""

    min_corner: np.ndarray
    max_corner: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "min_corner", np.asarray(self.min_corner, float))
        object.__setattr__(self, "max_corner", np.asarray(self.max_corner, float))
        if np.any(self.max_corner <= self.min_corner):
            raise InvalidGeometryError("box max corner must exceed min corner")

    def raycast(self, origin: np.ndarray, direction: np.ndarray,
                r_max: float) -> RayHit | None:
        """Slab test; two-sided faces, nearest entering face reported."""
        t_enter, t_exit = 0.0, r_max
        axis, sign = -1, 1.0
        for k in range(3):
            d = direction[k]
            if abs(d) < _EPS:
                if not self.min_corner[k] <= origin[k] <= self.max_corner[k]:
                    return None
                continue
            t0 = (self.min_corner[k] - origin[k]) / d
            t1 = (self.max_corner[k] - origin[k]) / d
            s = -1.0 if d > 0 else 1.0
            if t0 > t1:
                t0, t1 = t1, t0
            if t0 > t_enter:
                t_enter, axis, sign = t0, k, s
            t_exit = min(t_exit, t1)
            if t_enter > t_exit:
                return None
        if axis < 0 or t_enter < _EPS or t_enter > r_max:
            return None  # origin inside, behind, or out of range
        normal = np.zeros(3)
        normal[axis] = sign
        return RayHit(t_enter, origin + t_enter * direction, normal)

    def contains_xy(self, x: float, y: float) -> bool:
        return (self.min_corner[0] <= x <= self.max_corner[0]
                and self.min_corner[1] <= y <= self.max_corner[1])


@dataclass(frozen=True)
class CircleWall:
    """Analytic vertical cylinder wall (e.g. a circular room boundary)."""

    center: np.ndarray  # x, y
    radius: float
    height: float
    z0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, float))
        if self.radius <= 0.0 or self.height <= 0.0:
            raise InvalidGeometryError("circle wall needs positive radius and height")

    def raycast(self, origin: np.ndarray, direction: np.ndarray,
                r_max: float) -> RayHit | None:
        ox = origin[0] - self.center[0]
        oy = origin[1] - self.center[1]
        dx, dy = direction[0], direction[1]
        a = dx * dx + dy * dy
        if a < _EPS:
            return None
        b = ox * dx + oy * dy
        c = ox * ox + oy * oy - self.radius * self.radius
        disc = b * b - a * c
        if disc < 0.0:
            return None
        sq = math.sqrt(disc)
        for t in ((-b - sq) / a, (-b + sq) / a):
            if _EPS < t <= r_max:
                point = origin + t * direction
                if self.z0 <= point[2] <= self.z0 + self.height:
                    radial = np.array([point[0] - self.center[0],
                                       point[1] - self.center[1], 0.0])
                    radial /= self.radius
                    # two-sided: face the incoming ray
                    if np.dot(radial, direction) > 0.0:
                        radial = -radial
                    return RayHit(t, point, radial)
        return None

    def crosses_xy(self, x: float, y: float) -> bool:
        """True when a point lies on or outside the wall radius."""
        return math.hypot(x - self.center[0], y - self.center[1]) >= self.radius


class Scene:
    """Immutable world geometry with ray, ground, and footprint queries."""

    def __init__(self, grid: OccupancyGrid | None = None,
                 heightmap: Heightmap | None = None,
                 boxes: list[Box] | None = None,
                 circles: list[CircleWall] | None = None,
                 wall_height: float = 1.0,
                 name: str = "scene"):
        if grid is None and heightmap is None and not boxes and not circles:
            raise InvalidGeometryError("scene needs at least one geometry source")
        self.grid = grid
        self.heightmap = heightmap
        self.boxes = list(boxes or [])
        self.circles = list(circles or [])
        self.wall_height = wall_height
        self.name = name

    # -- ray queries --------------------------------------------------

    def raycast(self, origin: np.ndarray, direction: np.ndarray,
                r_max: float) -> RayHit | None:
        origin = np.asarray(origin, float)
        direction = np.asarray(direction, float)
        norm = np.linalg.norm(direction)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidGeometryError("ray direction must be a unit vector")
        best: RayHit | None = None
        if self.grid is not None:
            best = self._raycast_grid(origin, direction, r_max)
        for box in self.boxes:
            hit = box.raycast(origin, direction, r_max)
            if hit is not None and (best is None or hit.distance < best.distance):
                best = hit
        for circle in self.circles:
            hit = circle.raycast(origin, direction, r_max)
            if hit is not None and (best is None or hit.distance < best.distance):
                best = hit
        if self.heightmap is not None:
            hit = self._raycast_heightmap(origin, direction, r_max)
            if hit is not None and (best is None or hit.distance < best.distance):
                best = hit
        return best

    def _cell_box(self, row: int, col: int) -> Box:
        g = self.grid
        x0 = g.origin[0] + col * g.resolution
        y0 = g.origin[1] + (g.height - 1 - row) * g.resolution
        return Box(np.array([x0, y0, 0.0]),
                   np.array([x0 + g.resolution, y0 + g.resolution,
                             self.wall_height]))

    def _raycast_grid(self, origin: np.ndarray, direction: np.ndarray,
                      r_max: float) -> RayHit | None:
        """2-D DDA over occupied cells, exact slab test per candidate."""
        g = self.grid
        res = g.resolution
        dx, dy = direction[0], direction[1]
        u = (origin[0] - g.origin[0]) / res
        v = (origin[1] - g.origin[1]) / res
        col = int(math.floor(u))
        gv = int(math.floor(v))  # bottom-up grid row index

        def try_cell(c: int, r_bottom_up: int) -> RayHit | None:
            row = g.height - 1 - r_bottom_up
            if g.is_occupied(row, c):
                return self._cell_box(row, c).raycast(origin, direction, r_max)
            return None

        if abs(dx) < _EPS and abs(dy) < _EPS:
            return try_cell(col, gv)

        step_c = 1 if dx > 0 else -1
        step_v = 1 if dy > 0 else -1
        # distance along the ray to the next cell boundary on each axis
        t_max_x = math.inf if abs(dx) < _EPS else \
            ((col + (dx > 0)) * res + g.origin[0] - origin[0]) / dx
        t_max_y = math.inf if abs(dy) < _EPS else \
            ((gv + (dy > 0)) * res + g.origin[1] - origin[1]) / dy
        t_delta_x = math.inf if abs(dx) < _EPS else res / abs(dx)
        t_delta_y = math.inf if abs(dy) < _EPS else res / abs(dy)

        t = 0.0
        while t <= r_max:
            hit = try_cell(col, gv)
            if hit is not None:
                return hit
            if t_max_x < t_max_y:
                t = t_max_x
                t_max_x += t_delta_x
                col += step_c
            else:
                t = t_max_y
                t_max_y += t_delta_y
                gv += step_v
            # give up once the ray has left the grid for good
            if (col < -1 or col > g.width or gv < -1 or gv > g.height):
                moving_away = ((col < 0 and dx <= 0) or (col >= g.width and dx >= 0)
                               or (gv < 0 and dy <= 0) or (gv >= g.height and dy >= 0))
                if moving_away:
                    return None
        return None

    def _raycast_heightmap(self, origin: np.ndarray, direction: np.ndarray,
                           r_max: float) -> RayHit | None:
        """March at half-cell steps, then bisect the crossing interval."""
        hm = self.heightmap
        step = 0.5 * hm.resolution

        def above(t: float) -> float:
            p = origin + t * direction
            return p[2] - hm.elevation_at(p[0], p[1])

        if above(0.0) <= 0.0:
            return None  # starting below the surface
        t_prev = 0.0
        t = step
        while t_prev < r_max:
            t = min(t, r_max)
            if above(t) <= 0.0:
                lo, hi = t_prev, t
                for _ in range(20):
                    mid = 0.5 * (lo + hi)
                    if above(mid) <= 0.0:
                        hi = mid
                    else:
                        lo = mid
                t_hit = 0.5 * (lo + hi)
                point = origin + t_hit * direction
                _, normal, _ = hm.ground_query(point[0], point[1])
                return RayHit(t_hit, point, normal)
            if t >= r_max:
                return None
            t_prev = t
            t += step
        return None

    # -- ground and collision queries ---------------------------------

    def ground_query(self, x: float, y: float) -> tuple[float, np.ndarray, float]:
        """(elevation, unit normal, friction scale); flat-world fallback."""
        if self.heightmap is not None:
            return self.heightmap.ground_query(x, y)
        return 0.0, np.array([0.0, 0.0, 1.0]), 1.0

    def footprint_collides(self, x: float, y: float, yaw: float,
                           length: float, width: float) -> bool:
        """Overlap test of the vehicle's planar rectangle vs obstacles."""
        spacing = min(length, width) / 4.0
        if self.grid is not None:
            spacing = min(spacing, 0.5 * self.grid.resolution)
        cy, sy = math.cos(yaw), math.sin(yaw)
        half_l, half_w = 0.5 * length, 0.5 * width
        n_l = max(2, int(math.ceil(length / spacing)) + 1)
        n_w = max(2, int(math.ceil(width / spacing)) + 1)
        for lx in np.linspace(-half_l, half_l, n_l):
            for wy in np.linspace(-half_w, half_w, n_w):
                px = x + cy * lx - sy * wy
                py = y + sy * lx + cy * wy
                if self._point_blocked(px, py):
                    return True
        return False

    def _point_blocked(self, x: float, y: float) -> bool:
        if self.grid is not None:
            row, col = self.grid.world_to_cell(x, y)
            if self.grid.is_occupied(row, col):
                return True
        for box in self.boxes:
            if box.contains_xy(x, y):
                return True
        for circle in self.circles:
            if circle.crosses_xy(x, y):
                return True
        return False
