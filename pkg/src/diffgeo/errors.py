class DiffgeoError(Exception):
    """Base class for errors raised by this package."""


class DomainError(DiffgeoError, ValueError):
    """An argument lies outside the domain of the operation."""


class InvariantError(DiffgeoError, ValueError):
    """A constructed object violates one of its representation invariants."""


class ConvergenceError(DiffgeoError, RuntimeError):
    """An iterative procedure exhausted its budget."""
