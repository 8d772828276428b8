"""Deterministic scenario execution for all four run modes.

Modes:
  teleop — commands come from an external source (telemetry client or a
      provided callback); with no source the vehicle idles.
  replay — commands are fed tick-for-tick from a previous run's log.
  record — replays an input log while recording spaced waypoints.
  track  — closed-loop pure-pursuit + PID tracking of a trajectory file.

A run is fully determined by (config, seed, input log); wall time never
enters the simulation except for optional real-time pacing in teleop.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..dynamics import ActuatorCommand, Vehicle
from ..dynamics.vehicle import DEFAULT_DT
from ..environment import OccupancyGrid, Scene, save_map
from ..environment.scenarios import (
    circular_room,
    offroad_field,
    oval_track,
    parking_lot,
    racetrack,
)
from ..errors import ConfigError, NoPathError
from ..navigation import (
    OccupancyMapper,
    PidState,
    TrackerConfig,
    WaypointRecorder,
    load_trajectory,
    pure_pursuit_steer,
    save_trajectory,
)
from ..navigation.tracking import cross_track_error, pid_speed
from ..params import load_vehicle_params
from ..sensors import Lidar2dParams, lidar2d_scan
from ..transforms import Transform, matrix_to_quat
from .config import ScenarioConfig, config_hash
from .runlog import RunLogReader, RunLogWriter


def make_scene(name: str, params: dict | None = None) -> Scene:
    params = dict(params or {})
    builders = {
        "parking_lot": parking_lot,
        "oval": oval_track,
        "racetrack": racetrack,
        "offroad": offroad_field,
        "circular_room": circular_room,
    }
    if name not in builders:
        raise ConfigError(f"unknown scene '{name}'")
    if name == "circular_room":
        params.setdefault("radius", 5.0)
    return builders[name](**params)


def _state_snapshot(state, vehicle: Vehicle) -> dict:
    t = state.pose.translation
    return {
        "x": float(t[0]), "y": float(t[1]), "z": float(t[2]),
        "quat": [float(v) for v in matrix_to_quat(state.pose.rotation)],
        "v": [float(v) for v in state.velocity],
        "omega": float(state.omega[2]),
        "steering": float(state.steering),
        "wheel_speeds": [float(v) for v in state.wheel_speeds],
        "wheel_revs": [float(v) for v in state.wheel_revs],
        "gear": int(state.powertrain.gear_index),
        "rpm": float(state.powertrain.engine_rpm),
        "throttle": float(state.applied_throttle),
        "brake": float(state.applied_brake),
        "collided": bool(state.collided),
    }


def _command_record(cmd: ActuatorCommand) -> dict:
    return {"throttle": float(cmd.throttle), "brake": float(cmd.brake),
            "steering": float(cmd.steering), "handbrake": bool(cmd.handbrake)}


def _command_from_record(raw: dict) -> ActuatorCommand:
    return ActuatorCommand(throttle=raw["throttle"], brake=raw["brake"],
                           steering=raw["steering"],
                           handbrake=raw.get("handbrake", False))


def _make_mapper(scene: Scene, resolution: float = 0.05) -> OccupancyMapper:
    if scene.grid is not None:
        g = scene.grid
        return OccupancyMapper(width=g.width, height=g.height,
                               resolution=g.resolution, origin=g.origin.copy())
    if scene.circles:
        r = max(c.radius for c in scene.circles) + 5 * resolution
        n = int(math.ceil(2 * r / resolution))
        return OccupancyMapper(width=n, height=n, resolution=resolution,
                               origin=np.array([-r, -r, 0.0]))
    lo = np.min([b.min_corner[:2] for b in scene.boxes], axis=0) - 0.5
    hi = np.max([b.max_corner[:2] for b in scene.boxes], axis=0) + 0.5
    n = np.ceil((hi - lo) / resolution).astype(int)
    return OccupancyMapper(width=int(n[0]), height=int(n[1]),
                           resolution=resolution,
                           origin=np.array([lo[0], lo[1], 0.0]))


@dataclass
class RunResult:
    log_path: Path
    metrics: dict
    map_grid: OccupancyGrid | None = None
    trajectory_path: Path | None = None
    extras: dict = field(default_factory=dict)


def replay_commands(log: RunLogReader) -> list[tuple[int, ActuatorCommand]]:
    return [(r["tick"], _command_from_record(r["cmd"])) for r in log]


def run_scenario(config: ScenarioConfig, command_source=None,
                 on_tick=None) -> RunResult:
    """Execute one scenario; returns the log path plus summary metrics.

    `command_source(tick, state) -> ActuatorCommand | None` supplies
    teleop commands (latest-wins, sampled at the control rate);
    `on_tick(tick, state)` is a read-only observer hook.
    """
    vehicle = Vehicle(load_vehicle_params(config.vehicle))
    scene = make_scene(config.scene, config.scene_params)
    dt = vehicle.dt
    n_ticks = int(round(config.duration / dt))
    control_every = max(1, int(round(1.0 / (config.control_rate_hz * dt))))

    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    run_hash = config_hash(config)
    log_path = out_dir / f"{config.mode}_{run_hash}.jsonl"

    # mode-specific setup --------------------------------------------
    traj = None
    pid = PidState()
    tracker = TrackerConfig(
        steering_limit=vehicle.params.steering.limit, **config.tracker)
    if config.mode == "track":
        if not config.trajectory_path:
            raise ConfigError("track mode requires trajectory_path")
        traj = load_trajectory(config.trajectory_path)
        if len(traj) < 2:
            raise NoPathError("trajectory has fewer than 2 waypoints")

    replay_queue: dict[int, ActuatorCommand] = {}
    if config.mode in ("replay", "record"):
        if not config.input_log:
            raise ConfigError(f"{config.mode} mode requires input_log")
        source_log = RunLogReader(config.input_log)
        source_log.require_hash(run_hash)
        replay_queue = dict(replay_commands(source_log))
        # truncated logs stop cleanly at their last tick; empty logs run 0
        n_ticks = min(n_ticks, max(replay_queue)) if replay_queue else 0

    recorder = None
    loop_closed = False
    if config.mode == "record":
        recorder = WaypointRecorder(threshold=max(
            0.05, 0.5 * vehicle.params.body.wheelbase))

    mapper = None
    lidar = None
    scan_every = 0
    if config.mapping:
        mapper = _make_mapper(scene)
        lidar = Lidar2dParams(r_min=0.05, r_max=12.0,
                              theta_res=math.radians(1.0))
        scan_every = max(1, int(round(1.0 / (config.scan_rate_hz * dt))))

    # main loop ------------------------------------------------------
    state = vehicle.initial_state(*config.start, scene=scene)
    cmd = ActuatorCommand()
    distance = 0.0
    collided = False
    xte_sum = 0.0
    xte_max = 0.0
    xte_samples = 0
    speed_err_sq = 0.0
    prev_xy = state.pose.translation[:2].copy()
    wall_start = time.monotonic()

    writer = RunLogWriter(log_path, run_hash,
                          meta={"vehicle": config.vehicle, "scene": config.scene,
                                "mode": config.mode, "seed": config.seed})
    try:
        for tick in range(1, n_ticks + 1):
            if config.mode in ("replay", "record"):
                if tick in replay_queue:
                    cmd = replay_queue[tick]
            elif (tick - 1) % control_every == 0:
                x, y = state.pose.translation[:2]
                yaw = math.atan2(state.pose.rotation[1, 0],
                                 state.pose.rotation[0, 0])
                speed = float(state.velocity[0])
                if config.mode == "track":
                    delta, v_target = pure_pursuit_steer(
                        float(x), float(y), yaw, speed, traj, tracker,
                        vehicle.params.body.wheelbase)
                    out = pid_speed(v_target, speed, pid,
                                    control_every * dt, tracker)
                    cmd = ActuatorCommand(
                        throttle=max(0.0, out), brake=max(0.0, -out),
                        steering=delta / tracker.steering_limit)
                    speed_err_sq += (v_target - speed) ** 2
                elif command_source is not None:
                    latest = command_source(tick, state)
                    if latest is not None:
                        cmd = latest

            state = vehicle.step(state, cmd, scene=scene)
            xy = state.pose.translation[:2]
            distance += float(np.hypot(*(xy - prev_xy)))
            prev_xy = xy.copy()

            if (tick - 1) % control_every == 0:
                yaw = math.atan2(state.pose.rotation[1, 0],
                                 state.pose.rotation[0, 0])
                if scene.footprint_collides(float(xy[0]), float(xy[1]), yaw,
                                            vehicle.params.length,
                                            vehicle.params.width):
                    collided = True
                    state.collided = True
                if traj is not None:
                    xte = cross_track_error(traj, float(xy[0]), float(xy[1]))
                    xte_sum += xte
                    xte_max = max(xte_max, xte)
                    xte_samples += 1
                if recorder is not None:
                    recorder.push(float(xy[0]), float(xy[1]),
                                  float(state.velocity[0]))
                    # stop once the loop closes on the first waypoint so
                    # the recorded trajectory is exactly one circuit
                    first = recorder.first
                    if (recorder.count > 10
                            and distance > 10 * recorder.threshold
                            and math.hypot(xy[0] - first[0],
                                           xy[1] - first[1])
                            < 2 * recorder.threshold):
                        loop_closed = True

            if mapper is not None and (tick - 1) % scan_every == 0:
                pose = Transform(rotation=state.pose.rotation.copy(),
                                 translation=np.array([
                                     float(xy[0]), float(xy[1]),
                                     0.5 * scene.wall_height]))
                ranges = lidar2d_scan(scene, pose, lidar)
                yaw = math.atan2(state.pose.rotation[1, 0],
                                 state.pose.rotation[0, 0])
                mapper.update(ranges, lidar.angles, float(xy[0]), float(xy[1]),
                              yaw, lidar.r_max)

            if (tick - 1) % config.log_decimation == 0:
                writer.write_tick(tick, _command_record(cmd),
                                  _state_snapshot(state, vehicle))
            if on_tick is not None:
                on_tick(tick, state)
            if collided or loop_closed:
                break
            if config.realtime and config.mode == "teleop":
                lag = tick * dt - (time.monotonic() - wall_start)
                if lag > 0:
                    time.sleep(lag)
    finally:
        writer.close()

    # outputs --------------------------------------------------------
    final = state.pose.translation
    metrics = {
        "ticks": state.tick,
        "sim_time": state.tick * dt,
        "distance": distance,
        "collided": collided,
        "final_x": float(final[0]),
        "final_y": float(final[1]),
    }
    if traj is not None and xte_samples:
        metrics["xte_mean"] = xte_sum / xte_samples
        metrics["xte_max"] = xte_max
        metrics["speed_rms"] = math.sqrt(speed_err_sq / xte_samples)

    result = RunResult(log_path=log_path, metrics=metrics)
    if mapper is not None:
        result.map_grid = mapper.to_grid()
        if config.map_path:
            save_map(result.map_grid, config.map_path)
    if recorder is not None and config.trajectory_path:
        recorded = recorder.finish(loop=True)
        save_trajectory(recorded, config.trajectory_path)
        result.trajectory_path = Path(config.trajectory_path)
    return result
