"""Exception hierarchy shared by all modules."""


class WStateError(Exception):
    """Base class for errors raised by this package."""


class NonHermitianError(WStateError, ValueError):
    """Operator failed the Hermiticity check."""


class ShapeError(WStateError, ValueError):
    """Operand dimensions do not match."""


class ResourceLimitError(WStateError):
    """Requested Hilbert-space dimension exceeds the configured cap."""


class SeriesConvergenceError(WStateError, ArithmeticError):
    """Power series for the matrix exponential did not converge."""


class UnsupportedVariantError(WStateError, ValueError):
    """Operation has no implementation for the requested model variant."""


class ConfigError(WStateError, ValueError):
    """Invalid run configuration.

    Args:
        message: Human-readable description.
        line: 1-based line number in the config file, if known.
        field: Offending key, if known.
    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
