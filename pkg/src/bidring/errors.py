"""Exception types shared across the package."""


class BidRingError(Exception):
    """Base class for all package errors."""


class DataFormatError(BidRingError):
    """A file could not be parsed under the declared format."""


class InvariantError(BidRingError):
    """A dataset violates one of its structural invariants."""


class ConfigError(BidRingError):
    """An operation was invoked with an unsupported configuration."""


class DegenerateSubsetError(BidRingError):
    """A reviewer subset has no well-defined bid density."""


class InfeasibleAssignmentError(BidRingError):
    """No assignment satisfies the load and conflict constraints."""

    def __init__(self, message, deficient_papers=()):
        super().__init__(message)
        self.deficient_papers = tuple(deficient_papers)
