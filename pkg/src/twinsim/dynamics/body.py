"""Sprung-mass body aggregation: total mass, COM and inertia."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError


@dataclass
class SprungMass:
    mass: float          # kg
    position: np.ndarray  # m, body frame

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)


@dataclass
class WheelParams:
    mass: float           # kg
    radius: float         # m
    mount_offset: float   # m, vertical offset of the wheel mount (Z_w)

    def __post_init__(self):
        if self.radius <= 0:
            raise InvalidParameterError("wheel radius must be > 0")
        if self.mass <= 0:
            raise InvalidParameterError("wheel mass must be > 0")

    @property
    def inertia(self) -> float:
        # solid-cylinder model about the spin axis
        return 0.5 * self.mass * self.radius ** 2


@dataclass
class BodyParams:
    sprung_masses: list[SprungMass]
    wheelbase: float      # m
    track: float          # m
    com_height: float     # m
    total_mass: float = field(init=False)
    com: np.ndarray = field(init=False)
    inertia: np.ndarray = field(init=False)  # diagonal (Ixx, Iyy, Izz) about COM

    def __post_init__(self):
        if self.wheelbase <= 0 or self.track <= 0:
            raise InvalidParameterError("wheelbase and track must be > 0")
        derived = derive_body(self.sprung_masses)
        self.total_mass = derived.total_mass
        self.com = derived.com
        self.inertia = derived.inertia


@dataclass
class DerivedBody:
    total_mass: float
    com: np.ndarray
    inertia: np.ndarray


def derive_body(sprung_masses: list[SprungMass]) -> DerivedBody:
    """Aggregate point sprung masses into total mass, COM and inertia.

    Inertia is the point-mass approximation per principal axis about the
    COM; products of inertia are neglected.
    """
    if not sprung_masses:
        raise InvalidParameterError("at least one sprung mass required")
    masses = np.array([sm.mass for sm in sprung_masses], dtype=float)
    if np.any(masses <= 0):
        raise InvalidParameterError("sprung masses must be > 0")
    positions = np.array([sm.position for sm in sprung_masses], dtype=float)

    total = float(masses.sum())
    com = (masses[:, None] * positions).sum(axis=0) / total

    d = positions - com
    ixx = float(np.sum(masses * (d[:, 1] ** 2 + d[:, 2] ** 2)))
    iyy = float(np.sum(masses * (d[:, 0] ** 2 + d[:, 2] ** 2)))
    izz = float(np.sum(masses * (d[:, 0] ** 2 + d[:, 1] ** 2)))
    return DerivedBody(total, com, np.array([ixx, iyy, izz]))
