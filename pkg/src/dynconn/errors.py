"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A constructor or operation received an out-of-range argument."""


class UsageError(RuntimeError):
    """An operation was called in a state its contract forbids."""


class TraceError(ValueError):
    """A trace failed to parse or validate; carries a 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
