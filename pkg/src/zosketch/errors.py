"""Exception types shared across the package."""


class ZoSketchError(Exception):
    """Base class for all zosketch errors."""


class DimensionError(ZoSketchError, ValueError):
    """An input has an incompatible or invalid dimension."""


class ConstructionError(ZoSketchError, ValueError):
    """An object specification is invalid (bad kind, size, or parameter)."""


class NumericError(ZoSketchError, ArithmeticError):
    """A computation produced non-finite values."""


class ParseError(ZoSketchError, ValueError):
    """A data file could not be parsed.

    ``lineno`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class StateError(ZoSketchError, RuntimeError):
    """An operation was called before required state was prepared."""


class CapabilityError(ZoSketchError, RuntimeError):
    """A request exceeds a desk-scale guardrail (e.g. dense eigensolve size)."""


class ConfigError(ZoSketchError, ValueError):
    """A run or experiment configuration is invalid."""
