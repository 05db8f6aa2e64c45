"""Exception types shared across the toolkit."""

from __future__ import annotations


class EthiplanError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EthiplanError):
    """Malformed input text; carries a 1-based source position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class UnsupportedConstructError(ParseError):
    """Input uses a construct outside the supported subset."""

    def __init__(self, construct: str, line: int = 0, column: int = 0):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}", line, column)


class ValidationError(EthiplanError):
    """A value violates a structural invariant."""


class GroundingError(EthiplanError):
    """Domain/problem pair cannot be grounded."""


class ResourceLimitError(EthiplanError):
    """A configured size or time cap was exceeded."""


class PreconditionError(EthiplanError):
    """An action was applied in a state violating its precondition."""

    def __init__(self, message: str, literal: str | None = None, step: int | None = None):
        self.literal = literal
        self.step = step
        super().__init__(message)


class CompilationError(EthiplanError):
    """Ethical task cannot be compiled (name collision, variant blow-up)."""


class ProviderError(EthiplanError):
    """Transport-level failure talking to a text-generation provider."""


class ExternalPlannerError(EthiplanError):
    """External planner executable failed or produced no plan."""
