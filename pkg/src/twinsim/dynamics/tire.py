"""Two-piece cubic-spline friction curve and slip computation.

The curve rises from (S_0, F_0) to a peak (S_e, F_e) and falls off to an
asymptote (S_a, F_a); beyond S_a the asymptote value holds. Both cubic
segments are solved exactly from their interpolation/derivative
constraints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError

# regularization floor for the slip denominators, m/s
SLIP_EPS = 0.1

# initial spline slope as a multiple of the secant F_e/S_e
DEFAULT_INITIAL_SLOPE_FACTOR = 1.5


@dataclass
class FrictionSpline:
    """Coefficients (a, b, c, d) per segment for f(S) = a*S^3+b*S^2+c*S+d."""

    s0: float
    se: float
    sa: float
    f0: float
    fe: float
    fa: float
    coeffs: np.ndarray  # shape (2, 4)

    def __call__(self, s):
        return self.evaluate(s)

    def evaluate(self, s):
        """Evaluate at |s| with the sign of s restored; saturates past S_a."""
        arr = np.asarray(s, dtype=float)
        mag = np.abs(arr)
        seg0 = np.polyval(self.coeffs[0], mag)
        seg1 = np.polyval(self.coeffs[1], mag)
        out = np.where(mag < self.se, seg0, np.where(mag < self.sa, seg1, self.fa))
        out = out * np.sign(arr)
        return float(out) if arr.ndim == 0 else out

    def slope(self, s: float) -> float:
        """df/dS of the signed curve at s (even in s); 0 past the asymptote."""
        mag = abs(float(s))
        if mag >= self.sa:
            return 0.0
        c = self.coeffs[0] if mag < self.se else self.coeffs[1]
        return float(3.0 * c[0] * mag ** 2 + 2.0 * c[1] * mag + c[2])


def build_friction_spline(anchors: dict, initial_slope_factor: float = DEFAULT_INITIAL_SLOPE_FACTOR) -> FrictionSpline:
    """Solve the two 4x4 linear systems defining the friction curve.

    anchors: {"zero": (S_0, F_0), "extremum": (S_e, F_e), "asymptote": (S_a, F_a)}

    Segment 0 interpolates zero->extremum with f'(S_e)=0 and an initial
    slope of initial_slope_factor * F_e/S_e; segment 1 interpolates
    extremum->asymptote with zero slope at both ends.
    """
    s0, f0 = anchors["zero"]
    se, fe = anchors["extremum"]
    sa, fa = anchors["asymptote"]
    if not (s0 < se < sa):
        raise InvalidParameterError(f"slip anchors must satisfy S_0 < S_e < S_a, got {s0}, {se}, {sa}")
    if not (fe >= fa > 0):
        raise InvalidParameterError("friction anchors must satisfy F_e >= F_a > 0")

    c_init = initial_slope_factor * (fe - f0) / (se - s0)

    def cubic_rows(s):
        return [s ** 3, s ** 2, s, 1.0]

    def slope_rows(s):
        return [3 * s ** 2, 2 * s, 1.0, 0.0]

    a0 = np.array([cubic_rows(s0), cubic_rows(se), slope_rows(se), slope_rows(s0)])
    b0 = np.array([f0, fe, 0.0, c_init])
    a1 = np.array([cubic_rows(se), slope_rows(se), cubic_rows(sa), slope_rows(sa)])
    b1 = np.array([fe, 0.0, fa, 0.0])
    coeffs = np.vstack([np.linalg.solve(a0, b0), np.linalg.solve(a1, b1)])
    return FrictionSpline(s0, se, sa, f0, fe, fa, coeffs)


@dataclass
class TireParams:
    longitudinal: dict  # anchor dict, forces at static corner load
    lateral: dict
    stiffness: float = 0.0  # C_alpha, stored for provenance; unused in the force law
    initial_slope_factor: float = DEFAULT_INITIAL_SLOPE_FACTOR
    spline_x: FrictionSpline = field(init=False)
    spline_y: FrictionSpline = field(init=False)

    def __post_init__(self):
        self.spline_x = build_friction_spline(self.longitudinal, self.initial_slope_factor)
        self.spline_y = build_friction_spline(self.lateral, self.initial_slope_factor)


def tire_slip(r_w: float, omega_w: float, v_x: float, v_y: float) -> tuple[float, float]:
    """Longitudinal and lateral slip from contact-patch velocities.

    Denominators are floored at SLIP_EPS (sign-preserving for S_x) so both
    slips stay finite through standstill.
    """
    denom = math.copysign(max(abs(v_x), SLIP_EPS), v_x if v_x != 0 else 1.0)
    s_x = (r_w * omega_w - v_x) / denom
    s_y = v_y / max(abs(v_x), SLIP_EPS)
    return s_x, s_y


def tire_forces(s_x: float, s_y: float, normal_load: float, static_load: float,
                params: TireParams) -> tuple[float, float]:
    """Tire forces from the friction curves, scaled linearly by load ratio.

    F_tx drives the wheel forward for positive slip; F_ty opposes the
    lateral slip velocity.
    """
    ratio = max(0.0, normal_load / static_load) if static_load > 0 else 0.0
    f_x = params.spline_x.evaluate(s_x) * ratio
    f_y = -params.spline_y.evaluate(s_y) * ratio
    return float(f_x), float(f_y)
