"""Wire protocol: compact JSON text frames plus binary scan frames.

Text message types: hello, accept, refuse, state, map_meta, command,
mode, ack, error. Every message carries the protocol version. Scan and
point-cloud payloads travel as separate binary frames (see
sensors.lidar encode_scan / encode_cloud). Infinite ranges encode as
null in text frames.
"""

from __future__ import annotations

import json
import math

from .. import PROTOCOL_VERSION
from ..transforms import matrix_to_quat

TEXT_TYPES = ("hello", "accept", "refuse", "state", "map_meta", "command",
              "mode", "ack", "error")

_REQUIRED = {
    "hello": ("role",),
    "refuse": ("reason",),
    "state": ("tick",),
    "command": ("throttle", "brake", "steering"),
    "mode": ("mode",),
    "error": ("reason",),
}


class ProtocolError(ValueError):
    """Malformed or unsupported wire message."""


def encode_message(message: dict) -> str:
    if message.get("type") not in TEXT_TYPES:
        raise ProtocolError(f"unknown message type: {message.get('type')!r}")
    payload = dict(message)
    payload.setdefault("version", PROTOCOL_VERSION)
    return json.dumps(payload, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def decode_message(raw: str) -> dict:
    try:
        message = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ProtocolError(f"not valid JSON: {err}") from err
    if not isinstance(message, dict):
        raise ProtocolError("message must be an object")
    kind = message.get("type")
    if kind not in TEXT_TYPES:
        raise ProtocolError(f"unknown message type: {kind!r}")
    if "version" not in message:
        raise ProtocolError("missing version field")
    for fld in _REQUIRED.get(kind, ()):
        if fld not in message:
            raise ProtocolError(f"{kind} message missing field '{fld}'")
    return message


def _null_inf(value: float) -> float | None:
    return None if math.isinf(value) else float(value)


def make_state_frame(state, sim_time: float) -> dict:
    """State snapshot for broadcast; at rest every velocity is exactly 0."""
    t = state.pose.translation
    return {
        "type": "state",
        "tick": int(state.tick),
        "time": float(sim_time),
        "pose": {"x": float(t[0]), "y": float(t[1]), "z": float(t[2]),
                 "quat": [float(v) for v in matrix_to_quat(state.pose.rotation)]},
        "velocity": [float(v) for v in state.velocity],
        "omega": float(state.omega[2]),
        "steering": float(state.steering),
        "gear": int(state.powertrain.gear_index),
        "rpm": float(state.powertrain.engine_rpm),
        "wheel_speeds": [float(v) for v in state.wheel_speeds],
        "throttle": float(state.applied_throttle),
        "brake": float(state.applied_brake),
        "collided": bool(state.collided),
    }


def make_command(throttle: float = 0.0, brake: float = 0.0,
                 steering: float = 0.0, handbrake: bool = False) -> dict:
    return {"type": "command", "throttle": float(throttle),
            "brake": float(brake), "steering": float(steering),
            "handbrake": bool(handbrake)}


def make_error(reason: str) -> dict:
    return {"type": "error", "reason": reason}


def make_ranges_payload(ranges) -> list[float | None]:
    """Text-frame representation of a range array: infinity becomes null."""
    return [_null_inf(float(r)) for r in ranges]
