"""Exception hierarchy shared by all gmrobust modules."""


class GmRobustError(Exception):
    """Base class for all domain errors raised by this package."""


class DimensionError(GmRobustError):
    """Operand shapes are incompatible; message names the offending operands."""


class ConfigurationError(GmRobustError):
    """An unsupported option was requested (activation kind, confidence level, ...)."""


class NonFiniteError(GmRobustError):
    """A computation produced NaN or Inf, or external input contained one."""


class ModelFormatError(GmRobustError):
    """A model/report file failed to parse or violated a format invariant."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CompositionError(DimensionError):
    """Generator output dim does not match classifier input dim."""


class GridTooLargeError(GmRobustError):
    """grid_falsify was asked for more points than the hard cap allows."""
