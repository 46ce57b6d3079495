"""Exception hierarchy shared by the engines, oracles and CLI."""


class LLLKitError(Exception):
    """Base class for all package errors."""


class CapExceededError(LLLKitError):
    """A resampling run hit its cap before reaching a clean configuration.

    Signals a probable criterion violation; the partial result is attached so
    callers can inspect the aborted run.
    """

    def __init__(self, message, config=None, log=None):
        super().__init__(message)
        self.config = config
        self.log = log


class SearcherIncompleteError(LLLKitError):
    """A debug full scan found a true bad event that the stack missed."""


class TooLargeError(LLLKitError):
    """An exhaustive oracle was asked to enumerate beyond its budget."""


class CriterionViolatedError(LLLKitError):
    """An operation requiring the resampling criterion was invoked without it."""


class InvalidInstanceError(LLLKitError):
    """Instance data violates a structural invariant."""


class ParseError(LLLKitError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class StoryExplosionError(LLLKitError):
    """A branching search exceeded its live-story cap."""
