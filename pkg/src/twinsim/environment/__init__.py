"""Static world: occupancy grids, heightmaps, scenes, shipped scenarios."""

from .grid import CellState, OccupancyGrid, load_map, save_map
from .heightmap import Heightmap, load_heightmap, save_heightmap
from .scene import Box, CircleWall, RayHit, Scene
from .scenarios import (
    circular_room,
    offroad_field,
    oval_track,
    parking_lot,
    racetrack,
)

__all__ = [
    "Box",
    "CellState",
    "CircleWall",
    "Heightmap",
    "OccupancyGrid",
    "RayHit",
    "Scene",
    "circular_room",
    "load_heightmap",
    "load_map",
    "offroad_field",
    "oval_track",
    "parking_lot",
    "racetrack",
    "save_heightmap",
    "save_map",
]
