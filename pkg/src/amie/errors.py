"""Error types shared across the package.

Errors that can cross the wire carry a stable machine-readable ``code``
so the service can map them onto protocol error responses.
"""


class AmieError(Exception):
    """Base class for all package errors."""

    code = "internal"


class FitError(AmieError):
    """Calibration fit is underdetermined or otherwise impossible."""

    code = "fit_error"


class LayoutError(AmieError):
    """Beacon layout cannot support localization."""

    code = "bad_layout"


class InsufficientSignalError(AmieError):
    """Fewer than three usable beacon readings."""

    code = "insufficient_signal"


class DegenerateGeometryError(AmieError):
    """Circle centers coincide or the selected nodes defeat trilateration."""

    code = "degenerate_geometry"


class FloorPlanError(AmieError):
    """Floor-plan document is malformed or violates an invariant."""

    code = "bad_floorplan"


class UnknownDestinationError(AmieError):
    code = "unknown_destination"


class UnknownRoomError(AmieError):
    code = "unknown_room"


class NavigationStateError(AmieError):
    """Waypoints exhausted without reaching the destination."""

    code = "navigation_state"


class WeatherUnavailableError(AmieError):
    code = "weather_unavailable"


class SimDisabledError(AmieError):
    """Simulator command received while serving in live mode."""

    code = "sim_disabled"


class ProtocolError(AmieError):
    """Malformed or invalid request frame. ``code`` is set per instance."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
