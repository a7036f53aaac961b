"""Exception hierarchy shared by all modules."""


class CosseratError(Exception):
    """Base class for every error raised by this package."""


class NotSkew(CosseratError, ValueError):
    pass


class Degenerate(CosseratError, ValueError):
    """A matrix is singular or has non-positive determinant."""


class DegenerateChart(Degenerate):
    pass


class DegenerateSurface(Degenerate):
    pass


class OutOfDomain(CosseratError, ValueError):
    pass


class NotARotation(CosseratError, ValueError):
    pass


class NyeViolated(CosseratError, ValueError):
    """Inputs to a decomposition do not satisfy the Nye relation."""


class InvalidParams(CosseratError, ValueError):
    pass


class LineSearchStalled(CosseratError, RuntimeError):
    """Armijo backtracking found no decreasing step above the minimum size."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SchemaError(CosseratError, ValueError):
    """A JSON document does not match the expected schema.

    ``pointer`` is a JSON pointer (RFC 6901) to the offending value.
    """

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
