"""Semantic exception hierarchy.

Public functions never raise bare ValueError/ArithmeticError; they raise one
of the classes below so callers (and the CLI) can map failures to exit codes.
"""

from __future__ import annotations


class ViseError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ViseError, ValueError):
    """An input violates its contract.

    ``field`` names the offending parameter so callers can report it.
    """

    def __init__(self, field: str, message: str) -> None:
        self.field = field
        super().__init__(f"{field}: {message}")


class DegenerateRuleError(ViseError):
    """The voting rule's outcome cannot depend on the group claims threshold.

    Raised when the egoist-vote tail probabilities above the two acceptance
    cuts coincide (for example alpha = 1, or a proposal distribution so
    extreme that both cuts are unreachable), so no claims threshold is
    better than any other.
    """


class TailUnderflowError(ViseError, OverflowError):
    """A conditional expectation overflowed because its denominator
    (a normal tail probability) underflowed to zero in float64."""
