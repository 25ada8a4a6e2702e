class UsageError(ValueError):
    """A caller violated an operation's precondition (bad length, mismatched config, ...)."""


class IntegrityError(RuntimeError):
    """Algorithms disagreed on the occurrences they reported."""
