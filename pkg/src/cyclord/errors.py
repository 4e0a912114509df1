"""Exception types shared across the package."""

from __future__ import annotations


class CyclordError(Exception):
    """Base class for every error raised by cyclord."""


class InputError(CyclordError, ValueError):
    """Malformed or inconsistent input (unknown labels, bad shapes, ...)."""


class PrecisionExhausted(CyclordError, ArithmeticError):
    """A numeric comparison could not be certified at the working precision.

    Raised instead of guessing; ``suggested_precision`` is a precision at
    which a retry has a reasonable chance of succeeding.
    """

    def __init__(self, message: str, suggested_precision: int):
        super().__init__(f"{message} (retry with precision >= {suggested_precision})")
        self.suggested_precision = suggested_precision


class BudgetExceeded(CyclordError):
    """The requested computation is larger than the configured budget."""

    def __init__(self, message: str, estimate: int | None = None):
        super().__init__(message)
        self.estimate = estimate


class InconclusiveComplexity(CyclordError):
    """Factor counts did not stabilize when the sample window was doubled."""

    def __init__(self, n, count, doubled_count):
        super().__init__(
            f"factor count for n={n} not stable: {count} at window W, "
            f"{doubled_count} at window 2W"
        )
        self.n = n
        self.count = count
        self.doubled_count = doubled_count
