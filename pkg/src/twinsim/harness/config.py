"""Scenario configuration: what to run, where, and for how long."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from ..errors import ConfigError

MODES = ("teleop", "record", "track", "replay")
SCENES = ("parking_lot", "oval", "racetrack", "offroad", "circular_room")


@dataclass
class ScenarioConfig:
    vehicle: str = "racer_1_10"  # preset name or YAML path
    scene: str = "oval"
    mode: str = "teleop"
    duration: float = 30.0  # simulated seconds
    seed: int = 0
    start: tuple[float, float, float] = (0.0, 0.0, 0.0)  # x, y, yaw
    control_rate_hz: float = 100.0
    state_rate_hz: float = 50.0  # telemetry broadcast
    scan_rate_hz: float = 10.0
    scene_params: dict = field(default_factory=dict)  # e.g. {"scale": 0.5}
    tracker: dict = field(default_factory=dict)  # TrackerConfig overrides
    trajectory_path: str | None = None  # track input / record output
    input_log: str | None = None  # replay source
    mapping: bool = False  # build an occupancy map during the run
    map_path: str | None = None
    output_dir: str = "runs"
    realtime: bool = False  # pace teleop to the wall clock
    log_decimation: int = 1  # write every Nth tick (commands still land
    # on their exact ticks because unchanged commands persist on replay)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got '{self.mode}'")
        if self.scene not in SCENES:
            raise ConfigError(f"scene must be one of {SCENES}, got '{self.scene}'")
        if self.duration <= 0.0:
            raise ConfigError(f"duration must be > 0, got {self.duration}")
        if self.control_rate_hz <= 0.0:
            raise ConfigError("control_rate_hz must be > 0")
        if self.log_decimation < 1:
            raise ConfigError("log_decimation must be >= 1")


def config_hash(config: ScenarioConfig) -> str:
    """Stable digest of the physical setup a log depends on.

    Only fields that change what a recorded command stream would do are
    hashed (vehicle, scene, start pose, seed, command cadence), so a
    teleop log can be replayed or re-scored under a different mode,
    duration, or output location without tripping the hash guard.
    """
    payload = asdict(config)
    keep = ("vehicle", "scene", "scene_params", "seed", "start",
            "control_rate_hz")
    payload = {k: payload[k] for k in keep}
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def load_scenario_config(path: str | Path) -> ScenarioConfig:
    try:
        raw = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as err:
        raise ConfigError(f"{path}: invalid YAML: {err}") from err
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: scenario config must be a mapping")
    known = set(ScenarioConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown fields {sorted(unknown)}")
    if "start" in raw:
        raw["start"] = tuple(raw["start"])
    return ScenarioConfig(**raw)
