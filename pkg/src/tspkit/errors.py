"""Exception hierarchy shared by every stage of the pipeline."""


class TspkitError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(TspkitError, ValueError):
    """A malformed instance record. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfeasibleError(TspkitError):
    """The instance admits no solution (disconnected graph, odd parity set, ...)."""

    def __init__(self, message, components=None):
        self.components = components
        super().__init__(message)


class CapacityError(TspkitError):
    """An exhaustive oracle was asked to handle an instance that is too large."""


class PreconditionError(TspkitError, ValueError):
    """An argument violates an operation's documented precondition."""


class CheckFailure(TspkitError):
    """A posterior verification of an output failed."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SamplingFailure(CheckFailure):
    """Every sparsification attempt failed its posterior checks."""
