"""WebSocket telemetry: state streaming and remote actuation commands."""

from .protocol import (
    PROTOCOL_VERSION,
    ProtocolError,
    decode_message,
    encode_message,
    make_command,
    make_error,
    make_state_frame,
)
from .server import DEAD_MAN_TIMEOUT, SessionManager, TelemetryServer

__all__ = [
    "DEAD_MAN_TIMEOUT",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "SessionManager",
    "TelemetryServer",
    "decode_message",
    "encode_message",
    "make_command",
    "make_error",
    "make_state_frame",
]
