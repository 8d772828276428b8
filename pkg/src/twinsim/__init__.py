"""twinsim: deterministic multi-scale vehicle digital-twin simulator."""

__version__ = "0.1.0"

PROTOCOL_VERSION = 1
