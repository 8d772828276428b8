from .body import BodyParams, SprungMass, WheelParams, derive_body
from .steering import SteeringParams, ackermann_angles, steering_step
from .tire import TireParams, FrictionSpline, build_friction_spline, tire_forces, tire_slip
from .powertrain import (
    ElectricPowertrain,
    EnginePowertrain,
    PowertrainState,
    Gear,
    electric_drive_torque,
    engine_rpm_update,
    engine_total_torque,
    shift_transmission,
    split_drive_torque,
)
from .brakes import BrakeParams, brake_torque
from .suspension import SuspensionParams, SuspensionState, antiroll_forces, suspension_forces
from .aero import AeroParams, aero_forces
from .state import ActuatorCommand, VehicleState, ScaleClass
from .vehicle import Vehicle, step_vehicle

__all__ = [name for name in dir() if not name.startswith("_")]
