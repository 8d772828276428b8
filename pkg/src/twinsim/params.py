"""Vehicle parameter files: YAML schema loader and shipped presets.

One file per vehicle. See docs in README for the schema; the four shipped
presets cover 1:14, 1:10, 1:5 and 1:1 scale classes with plausible
desk-scale values (marked non-calibrated).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .dynamics.aero import CasedAero, ConstantAero
from .dynamics.body import BodyParams, SprungMass, WheelParams
from .dynamics.brakes import DiscBrake, IdleHoldBrake
from .dynamics.powertrain import ElectricPowertrain, EnginePowertrain
from .dynamics.state import ScaleClass
from .dynamics.steering import SteeringParams
from .dynamics.suspension import SuspensionParams
from .dynamics.tire import TireParams
from .dynamics.vehicle import VehicleParams
from .errors import ConfigError


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing field '{key}' in {where}")
    return section[key]


def preset_names() -> list[str]:
    files = resources.files("twinsim").joinpath("presets")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".yaml"))


def load_vehicle_params(source: str | Path) -> VehicleParams:
    """Load a vehicle parameter file; `source` is a path or a preset name."""
    path = Path(source)
    if path.suffix in (".yaml", ".yml") and path.exists():
        raw = yaml.safe_load(path.read_text())
    else:
        res = resources.files("twinsim").joinpath(f"presets/{source}.yaml")
        if not res.is_file():
            raise ConfigError(f"unknown vehicle preset or file: {source}")
        raw = yaml.safe_load(res.read_text())
    return parse_vehicle_params(raw)


def parse_vehicle_params(raw: dict) -> VehicleParams:
    name = _require(raw, "name", "vehicle file")
    scale = ScaleClass(_require(raw, "scale", "vehicle file"))

    b = _require(raw, "body", "vehicle file")
    sprung = [SprungMass(m["mass"], np.asarray(m["position"], dtype=float))
              for m in _require(b, "sprung_masses", "body")]
    body = BodyParams(sprung, b["wheelbase"], b["track"], b["com_height"])

    w = _require(raw, "wheel", "vehicle file")
    wheel = WheelParams(w["mass"], w["radius"], w.get("mount_offset", 0.0))

    pt = _require(raw, "powertrain", "vehicle file")
    kind = _require(pt, "type", "powertrain")
    if kind == "electric":
        powertrain = ElectricPowertrain(
            max_torque=pt["max_torque"],
            torque_segments=[tuple(seg) for seg in pt["torque_segments"]],
            drive_config=pt.get("drive_config", "rwd"),
        )
    elif kind == "engine":
        powertrain = EnginePowertrain(
            torque_curve=[tuple(seg) for seg in pt["torque_curve"]],
            idle_rpm=pt["idle_rpm"],
            gear_ratios=list(pt["gear_ratios"]),
            fdr=pt["fdr"],
            shift_map=[(float(s), int(g)) for s, g in pt["shift_map"]],
            tire_radius=pt.get("tire_radius", wheel.radius),
            smoothing_gain=pt.get("smoothing_gain", 0.0),
            torque_drop=pt.get("torque_drop", 0.0),
            drive_config=pt.get("drive_config", "rwd"),
        )
    else:
        raise ConfigError(f"unknown powertrain type: {kind}")

    br = _require(raw, "brake", "vehicle file")
    if br["type"] == "idle_hold":
        brake = IdleHoldBrake(br["hold_torque"])
    elif br["type"] == "disc":
        brake = DiscBrake(br["disk_radius"], br["braking_distance_60mph"])
    else:
        raise ConfigError(f"unknown brake type: {br['type']}")

    st = _require(raw, "steering", "vehicle file")
    steering = SteeringParams(st["limit"], st["sensitivity"],
                              st["speed_factor"], st["vmax"])

    su = _require(raw, "suspension", "vehicle file")
    corner_masses = np.array([sm.mass for sm in sprung])
    suspension = SuspensionParams(
        corner_masses=corner_masses,
        stiffness=su.get("stiffness"),
        damping=su.get("damping"),
        natural_freq=su.get("natural_freq"),
        damping_ratio=su.get("damping_ratio"),
        equilibrium=su.get("equilibrium", 0.05),
        force_offset=su.get("force_offset", 0.0),
        antiroll_stiffness=su.get("antiroll_stiffness", 0.0),
    )

    ti = _require(raw, "tire", "vehicle file")
    tire = TireParams(
        longitudinal={k: tuple(v) for k, v in ti["longitudinal"].items()},
        lateral={k: tuple(v) for k, v in ti["lateral"].items()},
        stiffness=ti.get("stiffness", 0.0),
        initial_slope_factor=ti.get("initial_slope_factor", 1.5),
    )

    ae = _require(raw, "aero", "vehicle file")
    if ae["type"] == "constant":
        aero = ConstantAero(ae["linear_drag"], ae["angular_drag"])
    elif ae["type"] == "cased":
        aero = CasedAero(ae["f_d_max"], ae["f_d_idle"], ae["f_d_rev"],
                         ae["v_max"], ae["v_rev"],
                         ae.get("downforce_coeff", 0.0),
                         ae.get("angular_drag", 0.0))
    else:
        raise ConfigError(f"unknown aero type: {ae['type']}")

    fp = _require(raw, "footprint", "vehicle file")
    return VehicleParams(
        name=name, scale=scale, body=body, wheel=wheel, powertrain=powertrain,
        brake=brake, steering=steering, suspension=suspension, tire=tire,
        aero=aero, length=fp["length"], width=fp["width"], height=fp["height"],
        sensors=raw.get("sensors", {}), calibrated=raw.get("calibrated", False),
    )
