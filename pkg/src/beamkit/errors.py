"""Exception taxonomy shared by all beamkit modules.

Each CLI exit code maps onto one branch of this hierarchy, so solver
failures, bad input files and infeasible geometries stay distinguishable
all the way out to scripts.
"""


class BeamkitError(Exception):
    """Base class for all beamkit errors."""


class InvalidParameterError(BeamkitError):
    """A physical parameter is outside its valid domain (non-positive width, |gamma| > 1, ...)."""


class UnsolvableError(BeamkitError):
    """A solve has no solution in range (impedance out of range, negative discriminant, invisible beam)."""


class IncompatibleNetworkError(BeamkitError):
    """Two networks cannot be combined (frequency or reference-impedance mismatch)."""


class DegenerateNetworkError(BeamkitError):
    """A network operation hit a singular system (zero ABCD denominator, resonant loop)."""


class GeometryError(BeamkitError):
    """A lens geometry is unphysical (coincident ports, no valid contour branch)."""


class InfeasibleLayoutError(GeometryError):
    """Requested port layout cannot be realised (overlapping apertures)."""


class ParseError(BeamkitError):
    """An input file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(BeamkitError):
    """A run configuration is missing fields or has inconsistent values."""
