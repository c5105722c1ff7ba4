"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument is outside its documented domain."""


class InvalidStateError(RuntimeError):
    """An operation was called on state that violates its precondition."""


class CapacityError(RuntimeError):
    """An enumeration or materialization would exceed its configured budget."""


class InvariantViolation(AssertionError):
    """A per-generation invariant check failed.

    ``snapshot`` carries whatever the engine recorded about the failing
    generation (population fitnesses, normalization bounds, etc.).
    """

    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot or {}
