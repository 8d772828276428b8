"""Exception hierarchy shared across the simulator."""


class TwinsimError(Exception):
    """Base class for all simulator errors."""

    exit_code = 1


class InvalidParameterError(TwinsimError):
    """A parameter value violates its documented constraints."""

    exit_code = 2


class ConfigError(TwinsimError):
    """Scenario or vehicle configuration is missing or malformed."""

    exit_code = 2


class MapFormatError(TwinsimError):
    """Map image/metadata pair is malformed; message names the offending field."""

    exit_code = 5


class InvalidGeometryError(TwinsimError):
    """Geometric computation hit a degenerate configuration."""

    exit_code = 2


class NoPathError(TwinsimError):
    """Tracking was requested without a usable trajectory."""

    exit_code = 3


class SimulationDivergedError(TwinsimError):
    """A state field became NaN/inf; message carries the field name and tick."""

    exit_code = 4

    def __init__(self, field: str, tick: int | None = None):
        self.field = field
        self.tick = tick
        where = f" at tick {tick}" if tick is not None else ""
        super().__init__(f"non-finite value in '{field}'{where}")


class LogMismatchError(TwinsimError):
    """Replay input log was produced under a different configuration."""

    exit_code = 6
