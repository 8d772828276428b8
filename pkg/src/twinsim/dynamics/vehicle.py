"""Integrated vehicle model: one deterministic fixed-timestep tick.

Tick order: steering slew -> gear logic -> powertrain torque ->
differential split -> brake torque -> wheel angular dynamics -> slips ->
tire forces -> suspension + anti-roll + aero -> planar rigid-body
integration (semi-implicit Euler) -> pose renormalization.

The chassis is planar (x, y, yaw) with per-corner vertical quarter-car
suspension; pitch/roll are not integrated into the pose. Below a low
blend speed the yaw/lateral channel follows the kinematic bicycle to
avoid the slip singularity at standstill.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import SimulationDivergedError
from ..transforms import renormalize_rotation, rot_z
from .aero import AeroParams, CasedAero, aero_forces
from .body import BodyParams, WheelParams
from .brakes import BrakeParams, DiscBrake, brake_torque
from .powertrain import (
    DriveConfig,
    ElectricPowertrain,
    EnginePowertrain,
    electric_drive_torque,
    engine_rpm_update,
    engine_total_torque,
    shift_transmission,
    split_drive_torque,
)
from .state import ActuatorCommand, ScaleClass, VehicleState
from .steering import SteeringParams, ackermann_angles, steering_step
from .suspension import G, SuspensionParams, advance_suspension, antiroll_forces, suspension_forces
from .tire import SLIP_EPS, TireParams, tire_slip

# default physics timestep, s
DEFAULT_DT = 1e-3

# kinematic/dynamic yaw blend speeds, m/s
BLEND_V_LO = 0.3
BLEND_V_HI = 1.0


@dataclass
class VehicleParams:
    name: str
    scale: ScaleClass
    body: BodyParams
    wheel: WheelParams
    powertrain: ElectricPowertrain | EnginePowertrain
    brake: BrakeParams
    steering: SteeringParams
    suspension: SuspensionParams
    tire: TireParams
    aero: AeroParams
    length: float  # overall footprint, m
    width: float
    height: float
    sensors: dict = field(default_factory=dict)
    calibrated: bool = False


class Vehicle:
    """Owns derived constants and steps VehicleState deterministically."""

    def __init__(self, params: VehicleParams, dt: float = DEFAULT_DT):
        self.params = params
        self.dt = dt
        p = params
        # wheel contact positions relative to the COM (x forward, y left)
        positions = np.array([sm.position[:2] for sm in p.body.sprung_masses])
        self.wheel_positions = positions - p.body.com[:2]
        self.mass = p.body.total_mass
        self.yaw_inertia = float(p.body.inertia[2])
        self.corner_masses = np.array([sm.mass for sm in p.body.sprung_masses])
        self.static_loads = self.corner_masses * G
        self.rear_offset = float(abs(self.wheel_positions[2:, 0].mean()))
        cfg = p.powertrain.drive_config
        self.driven = np.zeros(4, dtype=bool)
        if cfg in (DriveConfig.FWD, DriveConfig.AWD):
            self.driven[:2] = True
        if cfg in (DriveConfig.RWD, DriveConfig.AWD):
            self.driven[2:] = True

    def initial_state(self, x: float = 0.0, y: float = 0.0, yaw: float = 0.0,
                      scene=None) -> VehicleState:
        state = VehicleState()
        z0 = 0.0
        if scene is not None:
            z0 = scene.ground_query(x, y)[0]
        state.pose.rotation = rot_z(yaw)
        state.pose.translation = np.array([x, y, z0 + self.params.body.com_height])
        return state

    def momentum(self, state: VehicleState) -> np.ndarray:
        return self.mass * state.velocity

    def step(self, state: VehicleState, command: ActuatorCommand, scene=None,
             dt: float | None = None) -> VehicleState:
        dt = self.dt if dt is None else dt
        p = self.params
        s = state.copy()
        v_x, v_y = float(s.velocity[0]), float(s.velocity[1])
        omega_z = float(s.omega[2])
        speed = math.hypot(v_x, v_y)

        # steering
        s.steering = steering_step(s.steering, command.steering, v_x, dt, p.steering)
        delta_l, delta_r = ackermann_angles(s.steering, p.body.wheelbase, p.body.track)
        wheel_steer = np.array([delta_l, delta_r, 0.0, 0.0])

        # powertrain
        pt = s.powertrain
        pt.handbrake_engaged = command.handbrake
        driven_speeds = s.wheel_speeds[self.driven]
        pt.avg_wheel_rpm = float(driven_speeds.mean()) * 60.0 / (2.0 * math.pi)
        if isinstance(p.powertrain, EnginePowertrain):
            pt = shift_transmission(pt, speed, command.throttle, command.handbrake,
                                    command.gear_request, p.powertrain, dt)
            pt.engine_rpm = engine_rpm_update(pt, p.powertrain, dt)
            tau_total = engine_total_torque(command.throttle, pt, p.powertrain)
            drive_torques = split_drive_torque(tau_total, s.steering,
                                              p.powertrain.drive_config,
                                              p.powertrain.torque_drop)
            tau_out = tau_total / (4.0 if p.powertrain.drive_config == DriveConfig.AWD else 2.0)
        else:
            drive_torques = np.zeros(4)
            for i in range(4):
                if self.driven[i]:
                    drive_torques[i] = electric_drive_torque(
                        command.throttle, s.wheel_speeds[i], p.powertrain)
            tau_out = float(np.abs(drive_torques).sum())
        s.powertrain = pt

        # brakes (magnitudes; applied against wheel spin below)
        brake_mags = brake_torque(command.brake, command.handbrake, command.throttle,
                                  speed, self.corner_masses, p.brake)

        # ground contact and suspension
        if scene is not None:
            ground = np.empty(4)
            friction = np.empty(4)
            for i in range(4):
                wp = s.pose.apply(np.array([self.wheel_positions[i, 0],
                                            self.wheel_positions[i, 1], 0.0]))
                z, _, mu = scene.ground_query(wp[0], wp[1])
                ground[i] = z
                friction[i] = mu
        else:
            ground = np.zeros(4)
            friction = np.ones(4)
        advance_suspension(s.suspension, p.suspension, ground, dt)
        susp_forces, _ = suspension_forces(s.suspension, p.suspension,
                                           p.body.com_height, p.wheel.mount_offset,
                                           p.wheel.radius)

        # anti-roll per axle, acting on the normal loads
        antiroll = np.zeros(4)
        k_r = p.suspension.antiroll_stiffness
        if k_r > 0.0:
            for left, right in ((0, 1), (2, 3)):
                f_l, f_r = antiroll_forces(
                    float(s.suspension.sprung_disp[left]),
                    float(s.suspension.sprung_disp[right]),
                    bool(s.suspension.grounded[left]),
                    bool(s.suspension.grounded[right]), k_r)
                antiroll[left], antiroll[right] = f_l, f_r

        # aerodynamics
        drag_force, drag_torque, downforce = aero_forces(
            s.velocity, s.omega, tau_out, pt.gear_index, pt.avg_wheel_rpm, p.aero)

        # susp_forces is the dynamic deviation; add the static share
        normal_loads = np.maximum(0.0, self.static_loads + susp_forces
                                  + antiroll + downforce / 4.0)

        # per-wheel slip, tire forces, wheel angular dynamics
        i_w = p.wheel.inertia
        r_w = p.wheel.radius
        force_x = 0.0
        force_y = 0.0
        torque_z = 0.0
        for i in range(4):
            x_i, y_i = self.wheel_positions[i]
            vx_i = v_x - omega_z * y_i
            vy_i = v_y + omega_z * x_i
            gamma = wheel_steer[i]
            cg, sg = math.cos(gamma), math.sin(gamma)
            v_long = cg * vx_i + sg * vy_i
            v_lat = -sg * vx_i + cg * vy_i

            s_x, s_y = tire_slip(r_w, float(s.wheel_speeds[i]), v_long, v_lat)
            ratio = normal_loads[i] / self.static_loads[i] * friction[i]
            f_long = p.tire.spline_x.evaluate(s_x) * ratio
            f_lat = -p.tire.spline_y.evaluate(s_y) * ratio

            # implicit linearization of the slip force in the wheel update;
            # the tire reaction relaxes the wheel toward free rolling and may
            # not overshoot past it within one tick (prevents slip chatter)
            denom = max(abs(v_long), SLIP_EPS)
            k_omega = max(0.0, p.tire.spline_x.slope(s_x)) * ratio * r_w / denom
            i_eff = i_w + dt * r_w * k_omega
            omega_free = v_long / r_w
            omega_i = float(s.wheel_speeds[i])
            relaxed = omega_i - dt * r_w * f_long / i_eff
            if (omega_i - omega_free) * (relaxed - omega_free) < 0.0:
                relaxed = omega_free
            omega_i = relaxed + dt * drive_torques[i] / i_eff
            # brake torque slews the wheel toward zero spin, latching at rest
            brake_step = brake_mags[i] * dt / i_w
            if abs(omega_i) <= brake_step:
                omega_i = 0.0
            else:
                omega_i -= math.copysign(brake_step, omega_i)
            s.wheel_speeds[i] = omega_i
            s.wheel_revs[i] += omega_i * dt / (2.0 * math.pi)

            fx_b = cg * f_long - sg * f_lat
            fy_b = sg * f_long + cg * f_lat
            force_x += fx_b
            force_y += fy_b
            torque_z += x_i * fy_b - y_i * fx_b

        force_x += float(drag_force[0])
        force_y += float(drag_force[1])
        torque_z += float(drag_torque[2])

        # planar rigid-body integration with low-speed kinematic blend
        a_x = force_x / self.mass + omega_z * v_y
        a_y = force_y / self.mass - omega_z * v_x
        alpha_z = torque_z / self.yaw_inertia
        v_x_new = v_x + a_x * dt
        v_y_dyn = v_y + a_y * dt
        omega_dyn = omega_z + alpha_z * dt
        omega_kin = v_x_new * math.tan(s.steering) / p.body.wheelbase
        v_y_kin = omega_kin * self.rear_offset
        w = min(1.0, max(0.0, (abs(v_x_new) - BLEND_V_LO) / (BLEND_V_HI - BLEND_V_LO)))
        v_y_new = (1.0 - w) * v_y_kin + w * v_y_dyn
        omega_new = (1.0 - w) * omega_kin + w * omega_dyn

        s.velocity[0] = v_x_new
        s.velocity[1] = v_y_new
        s.omega[2] = omega_new

        s.pose.translation = s.pose.translation \
            + s.pose.rotation @ (s.velocity * dt)
        s.pose.rotation = renormalize_rotation(s.pose.rotation @ rot_z(omega_new * dt))
        s.pose.translation[2] = float(ground.mean()) + p.body.com_height \
            + float(s.suspension.sprung_disp.mean())

        s.applied_throttle = command.throttle
        s.applied_brake = command.brake
        s.tick = state.tick + 1

        self._check_finite(s)
        return s

    @staticmethod
    def _check_finite(s: VehicleState) -> None:
        for name, value in (("velocity", s.velocity),
                            ("omega", s.omega),
                            ("wheel_speeds", s.wheel_speeds),
                            ("steering", s.steering),
                            ("powertrain.engine_rpm", s.powertrain.engine_rpm),
                            ("pose.translation", s.pose.translation),
                            ("pose.rotation", s.pose.rotation)):
            if not np.all(np.isfinite(value)):
                raise SimulationDivergedError(name, s.tick)


def step_vehicle(vehicle: Vehicle, state: VehicleState, command: ActuatorCommand,
                 scene=None, dt: float | None = None) -> VehicleState:
    """Functional wrapper over Vehicle.step."""
    return vehicle.step(state, command, scene, dt)


def actuator_feedback(state: VehicleState) -> tuple[float, float]:
    """Applied (post-clamp, post-slew) throttle and steering angle."""
    return state.applied_throttle, state.steering
