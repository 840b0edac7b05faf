"""Exception hierarchy shared by all annuli modules."""


class AnnuliError(Exception):
    """Base class for errors raised by this package."""


class DomainError(AnnuliError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class UnsupportedFunctionError(AnnuliError):
    """The function model cannot be handled (e.g. divisor on the unit circle)."""


class BoundaryProximityError(AnnuliError):
    """A contour passes too close to a zero or pole of the integrand."""


class UnresolvedBoxError(AnnuliError):
    """Subdivision depth exhausted without isolating the divisor in a box."""

    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class ConfigError(AnnuliError):
    """A configuration or function-spec string failed to parse or validate.

    ``position`` is a human readable location such as ``"line 3"`` or
    ``"column 12"``; it is prefixed to the message.
    """

    def __init__(self, message, position=None):
        self.position = position
        self.bare_message = message
        super().__init__(f"{position}: {message}" if position else message)
