"""Exception types shared across the package."""


class ParseError(ValueError):
    """Raised on malformed `.aut` or `.ccs` input.

    Carries the 1-based source line (and column, where known).
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f"line {line}, column {column}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class StateBudgetError(RuntimeError):
    """Raised when a state-space expansion exceeds its state budget."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(
            f"state budget of {budget} states exceeded during expansion; "
            f"raise max_states if the system really is this large"
        )
