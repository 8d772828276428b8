"""Powertrain models: electric motor (small/mid scale) and
engine/transmission/differential (full scale)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import InvalidParameterError

# standstill threshold, m/s
EPS_V = 0.05
# gear-shift dwell with the clutch disengaged, s
SHIFT_DWELL = 0.3
# engine RPM first-order lag time constant, s
RPM_TAU = 0.2
# hysteresis band as a fraction of each shift-map speed threshold
SHIFT_HYSTERESIS = 0.1

# clamp on the differential torque-drop factor
TORQUE_DROP_MAX = 0.9


class Gear(Enum):
    PARK = "park"
    REVERSE = "reverse"
    NEUTRAL = "neutral"
    DRIVE = "drive"


class DriveConfig(Enum):
    FWD = "fwd"
    RWD = "rwd"
    AWD = "awd"


@dataclass
class ElectricPowertrain:
    """Torque-speed profile split into piecewise-linear segments."""

    max_torque: float                       # N*m
    torque_segments: list[tuple[float, float]]  # (wheel speed rad/s, torque N*m)
    drive_config: DriveConfig = DriveConfig.RWD

    def __post_init__(self):
        if isinstance(self.drive_config, str):
            self.drive_config = DriveConfig(self.drive_config.lower())
        if not self.torque_segments:
            raise InvalidParameterError("electric powertrain needs torque segments")
        speeds = [s for s, _ in self.torque_segments]
        if sorted(speeds) != speeds:
            raise InvalidParameterError("torque segments must be sorted by speed")


@dataclass
class EnginePowertrain:
    """Engine torque curve + automatic transmission + final drive."""

    torque_curve: list[tuple[float, float]]  # (RPM, N*m)
    idle_rpm: float
    gear_ratios: list[float]                 # forward gears 1..n; reverse uses -gear_ratios[0]
    fdr: float                               # final drive ratio
    shift_map: list[tuple[float, int]]       # (speed m/s, gear) upshift thresholds
    tire_radius: float                       # m
    smoothing_gain: float = 0.0              # throttle-response shaping gain
    torque_drop: float = 0.0                 # 1/rad, differential drop vs steering
    drive_config: DriveConfig = DriveConfig.RWD

    def __post_init__(self):
        if isinstance(self.drive_config, str):
            self.drive_config = DriveConfig(self.drive_config.lower())
        if self.fdr <= 0:
            raise InvalidParameterError("final drive ratio must be > 0")
        if any(gr == 0 for gr in self.gear_ratios):
            raise InvalidParameterError("gear ratios must be nonzero")
        rpms = [r for r, _ in self.torque_curve]
        if sorted(rpms) != rpms:
            raise InvalidParameterError("torque curve must be sorted by RPM")

    def gear_ratio(self, gear_index: int) -> float:
        if gear_index == 0:
            return 0.0
        if gear_index < 0:
            return -self.gear_ratios[0]
        return self.gear_ratios[gear_index - 1]

    def engine_torque(self, rpm: float) -> float:
        xs = [r for r, _ in self.torque_curve]
        ys = [t for _, t in self.torque_curve]
        return float(np.interp(rpm, xs, ys))


@dataclass
class PowertrainState:
    engine_rpm: float = 0.0
    gear_index: int = 0        # -1 reverse, 0 neutral, >=1 forward
    park: bool = False
    selector: Gear = Gear.DRIVE  # automatic mode defaults to drive
    shift_timer: float = 0.0   # >0 while a shift is in progress
    avg_wheel_rpm: float = 0.0
    handbrake_engaged: bool = False

    @property
    def shifting(self) -> bool:
        return self.shift_timer > 0.0


def electric_drive_torque(throttle: float, omega_w: float,
                          params: ElectricPowertrain) -> float:
    """Per-driven-wheel torque: throttle-scaled lookup of the segment
    profile at the wheel's speed magnitude; sign follows throttle."""
    throttle = max(-1.0, min(1.0, throttle))
    xs = [s for s, _ in params.torque_segments]
    ys = [t for _, t in params.torque_segments]
    tau = float(np.interp(abs(omega_w), xs, ys))
    return throttle * min(tau, params.max_torque)


def wheel_rpm_from_speed(v_mph: float, tire_radius_in: float, fdr: float, gr: float) -> float:
    """Engine RPM for a road speed in MPH with the tire radius in inches."""
    return v_mph * 5280.0 * 12.0 / (60.0 * 2.0 * math.pi * tire_radius_in) * fdr * gr


def engine_rpm_update(state: PowertrainState, params: EnginePowertrain,
                      dt: float) -> float:
    """Advance engine RPM toward idle + |RPM_w|*FDR*GR with a first-order
    lag; never drops below idle."""
    gr = abs(params.gear_ratio(state.gear_index))
    target = params.idle_rpm + abs(state.avg_wheel_rpm) * params.fdr * gr
    alpha = 1.0 - math.exp(-dt / RPM_TAU)
    rpm = state.engine_rpm + (target - state.engine_rpm) * alpha
    return max(params.idle_rpm, rpm)


def engine_total_torque(throttle: float, state: PowertrainState,
                        params: EnginePowertrain) -> float:
    """Total powertrain torque; exactly zero with the clutch disengaged
    (active shift), in neutral, or in park."""
    if state.shifting or state.gear_index == 0 or state.park:
        return 0.0
    throttle = max(0.0, min(1.0, throttle))
    smoothing = 1.0 + params.smoothing_gain * throttle ** 2
    tau_e = params.engine_torque(state.engine_rpm)
    return tau_e * params.gear_ratio(state.gear_index) * params.fdr * throttle * smoothing


def shift_transmission(state: PowertrainState, v: float, throttle: float,
                       handbrake: bool, gear_request: Gear | None,
                       params: EnginePowertrain, dt: float) -> PowertrainState:
    """Automatic gear selection with hysteresis, dwell, and the
    standstill/handbrake/selector rules. Mutates and returns `state`."""
    state.handbrake_engaged = handbrake
    if gear_request is not None:
        state.selector = gear_request

    if state.shift_timer > 0.0:
        state.shift_timer = max(0.0, state.shift_timer - dt)
        return state

    standstill = abs(v) < EPS_V

    def engage(gear_index: int, park: bool = False):
        if state.gear_index != gear_index or state.park != park:
            state.shift_timer = SHIFT_DWELL
        state.gear_index = gear_index
        state.park = park

    if standstill and handbrake:
        engage(0, park=True)
        return state

    if state.selector == Gear.PARK:
        if standstill:
            engage(0, park=True)
        return state

    if state.selector == Gear.NEUTRAL:
        engage(0)
        return state

    if state.selector == Gear.REVERSE:
        # forward motion defers the request; reverse engages via neutral
        if state.gear_index > 0:
            engage(0)
        elif state.gear_index == 0 and standstill:
            engage(-1)
        return state

    # selector DRIVE
    if state.gear_index < 0:
        engage(0)
        return state
    if standstill and abs(throttle) < 0.01 and state.gear_index != 0:
        engage(0)  # auto-neutral at standstill
        return state
    if state.gear_index == 0:
        if abs(throttle) >= 0.01 or not standstill:
            engage(1)
        return state

    gear = state.gear_index
    n_gears = len(params.gear_ratios)
    thresholds = dict((g, s) for s, g in params.shift_map)
    up = thresholds.get(gear + 1)
    if up is not None and gear + 1 <= n_gears and abs(v) >= up:
        engage(gear + 1)
        return state
    down = thresholds.get(gear)
    if gear > 1 and down is not None and abs(v) < down * (1.0 - SHIFT_HYSTERESIS):
        engage(gear - 1)
    return state


def split_drive_torque(tau_total: float, delta: float, drive_config: DriveConfig,
                       torque_drop: float) -> np.ndarray:
    """Divide total torque across wheels [FL, FR, RL, RR].

    The turn-side wheel loses torque via the differential drop:
    left scaled by (1 - clamp(drop*|delta^-|)), right by
    (1 - clamp(drop*|delta^+|)), each clamped to at most 0.9.
    """
    if isinstance(drive_config, str):
        drive_config = DriveConfig(drive_config.lower())
    tau_out = tau_total / (4.0 if drive_config == DriveConfig.AWD else 2.0)
    delta_pos = max(delta, 0.0)
    delta_neg = min(delta, 0.0)
    left = tau_out * (1.0 - min(TORQUE_DROP_MAX, max(0.0, torque_drop * abs(delta_neg))))
    right = tau_out * (1.0 - min(TORQUE_DROP_MAX, max(0.0, torque_drop * abs(delta_pos))))
    out = np.zeros(4)
    if drive_config in (DriveConfig.FWD, DriveConfig.AWD):
        out[0], out[1] = left, right
    if drive_config in (DriveConfig.RWD, DriveConfig.AWD):
        out[2], out[3] = left, right
    return out
