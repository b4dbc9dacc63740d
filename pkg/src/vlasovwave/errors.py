"""Exception types shared across the package."""


class VlasovWaveError(Exception):
    """Base class for all errors raised by this package."""


class DomainTooSmallError(VlasovWaveError):
    """The spatial domain cannot contain the light cone of the data for the
    requested horizon."""


class LightConeViolationError(VlasovWaveError):
    """A support box or characteristic trace reached the domain boundary.
    This indicates a misconfigured run, not a data condition."""


class OutOfDomainError(VlasovWaveError):
    """An interpolation query fell outside the grid. The light-cone margin
    makes this a logic bug rather than something to extrapolate through."""


class UnsupportedConfigurationError(VlasovWaveError):
    """An operation was invoked with inputs outside its stated scope."""


class ConfigError(VlasovWaveError):
    """Configuration text failed to parse or validate."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
