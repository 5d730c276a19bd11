"""Exception types shared across the package."""


class FixedCircleError(Exception):
    """Base class for all package errors."""


class MalformedInputError(FixedCircleError):
    """Structurally bad input: non-square matrix, negative distance or
    radius, unknown carrier kind, non-total map, negative weight function."""


class DomainError(FixedCircleError):
    """A point, label, or identifier outside the expected domain."""


class InvalidMetricError(FixedCircleError):
    """Raised when an operation requires a valid metric but the axiom
    check found violations. Carries the validation report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConstraintViolationError(FixedCircleError):
    """A construction precondition failed (e.g. the anchor sits on the
    circle it must avoid)."""


class AnchorSearchError(FixedCircleError):
    """No carrier point satisfies the anchor constraints. ``blocked``
    lists the constraints that could not be met."""

    def __init__(self, message, blocked=()):
        super().__init__(message)
        self.blocked = tuple(blocked)
