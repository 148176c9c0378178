"""Exception hierarchy for the identifiability laboratory."""


class IdentifyError(Exception):
    """Base class for all laboratory errors."""


class DomainError(IdentifyError, ValueError):
    """Argument lies outside the domain of the operation."""


class ModelValidationError(IdentifyError, ValueError):
    """An item or model violates a structural requirement."""

    def __init__(self, message: str, item_index: int | None = None):
        super().__init__(message)
        self.item_index = item_index


class QuadratureError(IdentifyError, ArithmeticError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


class EvaluationError(IdentifyError, ArithmeticError):
    """IRF or derivative evaluation failed at a specific trait value."""

    def __init__(self, message: str, theta: float):
        super().__init__(f"{message} at theta={theta!r}")
        self.theta = theta


class NoSolutionError(IdentifyError, ValueError):
    """Root-finding target is outside the attainable range."""


class EmptyRecoveryGridError(IdentifyError, RuntimeError):
    """No admissible knot falls inside the recovery interval."""


class DegenerateDataError(IdentifyError, ValueError):
    """Data or distribution is degenerate for the requested computation."""


class EnumerationLimitError(IdentifyError, ValueError):
    """Exhaustive enumeration requested beyond the supported item count."""
