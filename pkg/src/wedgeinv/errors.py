"""Exception types shared across the toolkit."""


class InvalidInputError(ValueError):
    """Input violates a documented precondition."""


class NotEquivalentError(InvalidInputError):
    """Two tuples or representations are not related as required."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates a bug, never bad input."""
