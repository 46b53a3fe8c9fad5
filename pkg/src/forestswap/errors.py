"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed edge-list, base, or tuple text."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ContractError(ValueError):
    """An operation was called with arguments violating its precondition."""


class InvariantError(RuntimeError):
    """An internal invariant failed. This indicates a bug, never bad input."""


class PathError(InvariantError):
    """A constructed path failed re-verification at some junction."""

    def __init__(self, message, junction=None):
        self.junction = junction
        super().__init__(message)
