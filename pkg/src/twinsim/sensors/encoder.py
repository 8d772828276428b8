"""Incremental wheel encoders: cumulative signed tick counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InvalidParameterError


@dataclass(frozen=True)
class EncoderParams:
    ppr: int  # pulses per wheel revolution
    cgr: float = 1.0  # coupling gear ratio between wheel and encoder shaft

    def __post_init__(self):
        if self.ppr < 1:
            raise InvalidParameterError(f"encoder ppr must be >= 1, got {self.ppr}")
        if self.cgr <= 0.0:
            raise InvalidParameterError(f"encoder cgr must be > 0, got {self.cgr}")


def encoder_ticks(revolutions: float, params: EncoderParams) -> int:
    """Cumulative tick count for a signed wheel revolution total.

    ticks = floor(PPR * CGR * |N_rev|), carrying the rotation sign.
    """
    magnitude = math.floor(params.ppr * params.cgr * abs(revolutions))
    return int(math.copysign(magnitude, revolutions)) if revolutions else 0
