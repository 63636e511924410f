"""Exception hierarchy shared by every module."""


class ThermoformError(Exception):
    """Base class for all library errors."""


class InvalidInputError(ThermoformError, ValueError):
    """Arguments violate a documented precondition (alphabet, range, shape)."""


class ResourceLimitError(ThermoformError):
    """An exhaustive enumeration would exceed the configured word budget.

    ``partial`` carries whatever was computed before the limit was hit, or
    ``None`` when nothing useful exists.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NumericalFailureError(ThermoformError, ArithmeticError):
    """A numerical routine did not reach its accuracy target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PreconditionError(ThermoformError, ValueError):
    """A mathematical precondition (proximality, equivariance) does not hold."""


class ParseError(InvalidInputError):
    """Malformed system-description text, with a 1-based line/column."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column
