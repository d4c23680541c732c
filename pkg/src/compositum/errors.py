"""Shared exception types."""


class InvariantViolation(Exception):
    """An internal cross-check failed; the result cannot be trusted."""


class TruncationInconclusive(Exception):
    """A truncated-series comparison could not decide the question."""


class UnsupportedCoefficient(ValueError):
    """An operation requires a coefficient of a special shape (e.g. a root of unity)."""


class InputError(ValueError):
    """Malformed user input (parse errors, violated preconditions)."""
