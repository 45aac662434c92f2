"""
Exception Hierarchy

This module defines the errors raised across the facility location game.
Every error derives from `FacilityLocationError`, so callers can catch the
whole family at once; the CLI maps each class to a stable exit code.
"""


class FacilityLocationError(Exception):
    """Base class for every error raised by this package."""


class InputError(FacilityLocationError, ValueError):
    """
    Malformed input: bad numbers, bad indices or invalid instance shapes.

    Args:
        message (str): Human readable description
        line (int | None): 1-based line in the source file, when known
        column (int | None): 1-based column in the source file, when known

    Example:
        - str(InputError("bad", line=3, column=7))
          # Returns: "line 3, column 7: bad"
    """

    def __init__(
        self,
        message: str,
        line: int | None = None,
        column: int | None = None,
    ) -> None:
        self.message = message
        self.line = line
        self.column = column
        super().__init__(message)

    def __str__(self) -> str:
        if self.line is not None and self.column is not None:
            return f"line {self.line}, column {self.column}: {self.message}"
        return self.message


class InfeasibleError(InputError):
    """More facilities requested than there are agents."""


class PreconditionError(FacilityLocationError):
    """An operation was called outside of its structural preconditions."""


class MechanismPreconditionError(PreconditionError):
    """
    A mechanism cannot be applied to the given instance.

    Args:
        mechanism (str): CLI identifier of the mechanism
        requirement (str): The violated precondition, e.g. "requires odd n"

    Example:
        - str(MechanismPreconditionError("uniform", "requires odd n"))
          # Returns: "uniform: requires odd n"
    """

    def __init__(self, mechanism: str, requirement: str) -> None:
        self.mechanism = mechanism
        self.requirement = requirement
        super().__init__(f"{mechanism}: {requirement}")

    def __reduce__(self):
        # crosses process boundaries in parallel sweeps
        return type(self), (self.mechanism, self.requirement)


class UnsupportedVariantError(FacilityLocationError):
    """The operation has no rule for the instance's cost variant."""


class BudgetExceededError(FacilityLocationError):
    """Exhaustive enumeration would exceed the configured budget."""


class LotteryError(FacilityLocationError):
    """A lottery breaks its invariants (negative or non-unit mass)."""


class RegressionFailure(FacilityLocationError):
    """A regression fixture did not reproduce its expected value."""


__all__ = [
    "FacilityLocationError",
    "InputError",
    "InfeasibleError",
    "PreconditionError",
    "MechanismPreconditionError",
    "UnsupportedVariantError",
    "BudgetExceededError",
    "LotteryError",
    "RegressionFailure",
]
