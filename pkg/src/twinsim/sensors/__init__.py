"""Sensor models: pure samplers over vehicle state and scene geometry."""

from ..dynamics.vehicle import actuator_feedback
from .camera import CameraParams, camera_matrices, project_points
from .encoder import EncoderParams, encoder_ticks
from .ins import InsParams, InsSample, InsSensor
from .lidar import (
    Lidar2dParams,
    Lidar3dParams,
    decode_cloud,
    decode_scan,
    encode_cloud,
    encode_scan,
    lidar2d_scan,
    lidar3d_scan,
)

__all__ = [
    "CameraParams",
    "EncoderParams",
    "InsParams",
    "InsSample",
    "InsSensor",
    "Lidar2dParams",
    "Lidar3dParams",
    "actuator_feedback",
    "camera_matrices",
    "decode_cloud",
    "decode_scan",
    "encode_cloud",
    "encode_scan",
    "encoder_ticks",
    "lidar2d_scan",
    "lidar3d_scan",
    "project_points",
]
