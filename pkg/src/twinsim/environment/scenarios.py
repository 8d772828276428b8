"""Shipped benchmark scenarios: parking lot, oval track, racetrack, off-road.

Geometry is synthetic and parameterized by vehicle scale so the same
scenario family works from desk-scale to full-scale. Wall extrusion
height defaults to twice the vehicle height so planar and 3-D LIDARs
see the same silhouette.
"""

from __future__ import annotations

import math
from importlib import resources

import numpy as np

from .grid import CellState, OccupancyGrid, load_map
from .heightmap import Heightmap
from .scene import Box, CircleWall, Scene


def circular_room(radius: float, wall_height: float = 1.0) -> Scene:
    """Empty circular room centred at the origin; analytic wall."""
    wall = CircleWall(center=np.zeros(2), radius=radius, height=wall_height)
    return Scene(circles=[wall], wall_height=wall_height, name="circular_room")


def parking_lot(scale: float = 1.0, wall_height: float = 1.0) -> Scene:
    """Rows of box obstacles (parked cars) inside a walled rectangle."""
    boxes = []
    lot_w, lot_l = 20.0 * scale, 30.0 * scale
    wall_t = 0.2 * scale
    # perimeter walls
    boxes.append(Box([-lot_l / 2, -lot_w / 2 - wall_t, 0],
                     [lot_l / 2, -lot_w / 2, wall_height]))
    boxes.append(Box([-lot_l / 2, lot_w / 2, 0],
                     [lot_l / 2, lot_w / 2 + wall_t, wall_height]))
    boxes.append(Box([-lot_l / 2 - wall_t, -lot_w / 2, 0],
                     [-lot_l / 2, lot_w / 2, wall_height]))
    boxes.append(Box([lot_l / 2, -lot_w / 2, 0],
                     [lot_l / 2 + wall_t, lot_w / 2, wall_height]))
    # two rows of parked vehicles with gaps
    car_l, car_w, car_h = 4.5 * scale, 1.8 * scale, 1.4 * scale
    for row_y in (-lot_w / 4, lot_w / 4):
        x = -lot_l / 2 + 2.0 * scale
        slot = 0
        while x + car_l < lot_l / 2 - 2.0 * scale:
            if slot % 3 != 2:  # every third slot empty
                boxes.append(Box([x, row_y - car_w / 2, 0],
                                 [x + car_l, row_y + car_w / 2, car_h]))
            x += car_l + 1.0 * scale
            slot += 1
    return Scene(boxes=boxes, wall_height=wall_height, name="parking_lot")


def _stadium_distance(x: float, y: float, half_straight: float) -> float:
    """Distance from a point to the stadium spine segment on the x axis."""
    px = min(max(x, -half_straight), half_straight)
    return math.hypot(x - px, y)


def oval_track(scale: float = 1.0, resolution: float = 0.05,
               wall_height: float = 1.0) -> Scene:
    """Stadium oval: free corridor between an inner island and outer wall.

    Centreline radius from the spine is (r_inner + r_outer) / 2.
    """
    half_straight = 4.0 * scale
    r_inner = 1.5 * scale
    r_outer = 3.5 * scale
    margin = 4.0 * resolution
    extent = half_straight + r_outer + margin
    n_x = int(math.ceil(2 * extent / resolution))
    n_y = int(math.ceil(2 * (r_outer + margin) / resolution))
    origin = np.array([-extent, -(r_outer + margin), 0.0])
    cells = np.full((n_y, n_x), CellState.FREE, dtype=np.int8)
    for row in range(n_y):
        for col in range(n_x):
            x = origin[0] + (col + 0.5) * resolution
            y = origin[1] + (n_y - row - 0.5) * resolution
            d = _stadium_distance(x, y, half_straight)
            if d <= r_inner or d >= r_outer:
                cells[row, col] = CellState.OCCUPIED
    grid = OccupancyGrid(cells=cells, resolution=resolution, origin=origin)
    return Scene(grid=grid, wall_height=wall_height, name="oval_track")


def oval_centerline(scale: float = 1.0, spacing: float = 0.1) -> np.ndarray:
    """Waypoints along the oval track centreline, counter-clockwise."""
    half_straight = 4.0 * scale
    r = (1.5 * scale + 3.5 * scale) / 2.0
    pts = []
    # bottom straight (left to right), right cap, top straight, left cap
    n = max(2, int(2 * half_straight / spacing))
    for x in np.linspace(-half_straight, half_straight, n, endpoint=False):
        pts.append((x, -r))
    n = max(2, int(math.pi * r / spacing))
    for a in np.linspace(-math.pi / 2, math.pi / 2, n, endpoint=False):
        pts.append((half_straight + r * math.cos(a), r * math.sin(a)))
    n = max(2, int(2 * half_straight / spacing))
    for x in np.linspace(half_straight, -half_straight, n, endpoint=False):
        pts.append((x, r))
    n = max(2, int(math.pi * r / spacing))
    for a in np.linspace(math.pi / 2, 3 * math.pi / 2, n, endpoint=False):
        pts.append((-half_straight + r * math.cos(a), r * math.sin(a)))
    return np.array(pts)


def racetrack(wall_height: float = 1.0) -> Scene:
    """Closed-loop racetrack loaded from the shipped grid-image map."""
    data_dir = resources.files("twinsim") / "data"
    with resources.as_file(data_dir / "racetrack.yaml") as path:
        grid = load_map(path)
    return Scene(grid=grid, wall_height=wall_height, name="racetrack")


def offroad_field(scale: float = 1.0, seed: int = 7,
                  resolution: float = 0.25) -> Scene:
    """Gently rolling terrain with low-friction patches."""
    rng = np.random.default_rng(seed)
    size = 40.0 * scale
    n = int(size / resolution)
    xs = np.linspace(0, 2 * math.pi, n)
    gx, gy = np.meshgrid(xs, xs)
    elev = np.zeros((n, n))
    for _ in range(4):
        fx, fy = rng.integers(1, 4, size=2)
        px, py = rng.uniform(0, 2 * math.pi, size=2)
        amp = rng.uniform(0.05, 0.15) * scale
        elev += amp * np.sin(fx * gx + px) * np.sin(fy * gy + py)
    friction = np.ones((n, n))
    for _ in range(6):
        cx, cy = rng.uniform(0.2 * n, 0.8 * n, size=2)
        rad = rng.uniform(0.05 * n, 0.12 * n)
        rr, cc = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        mask = (rr - cy) ** 2 + (cc - cx) ** 2 < rad ** 2
        friction[mask] = rng.uniform(0.4, 0.8)
    hm = Heightmap(elevations=elev, resolution=resolution,
                   origin=np.array([-size / 2, -size / 2]), friction=friction)
    return Scene(heightmap=hm, name="offroad_field")
