"""Exception hierarchy for proxbqp."""


class ProxBQPError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ProxBQPError, ValueError):
    pass


class NonFiniteValue(ProxBQPError, ValueError):
    pass


class FactorizationFailure(ProxBQPError, ArithmeticError):
    """Raised when a Cholesky pivot is not strictly positive."""


class ZeroMatrix(ProxBQPError, ValueError):
    """Raised when a matrix has no eigenvalue above the rank tolerance."""


class InvalidProblem(ProxBQPError, ValueError):
    pass


class DimensionTooLarge(ProxBQPError, ValueError):
    pass


class OutOfRange(ProxBQPError, ValueError):
    pass


class ValidationError(ProxBQPError, ValueError):
    pass


class ParseError(ProxBQPError, ValueError):
    """Malformed problem or solution file.

    Attributes
    ----------
    line : int or None
        1-based line number where the problem was detected.
    field : str or None
        Name of the header key or section being read.
    """

    def __init__(self, message, line=None, field=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field {field!r}")
        if loc:
            message = f"{', '.join(loc)}: {message}"
        super().__init__(message)
        self.line = line
        self.field = field
