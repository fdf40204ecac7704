"""Exception types shared across the package.

The CLI maps these onto exit codes: input problems exit 2, capacity limits
exit 3, broken internal invariants exit 4.
"""


class GraphInputError(ValueError):
    """Malformed input: unknown vertex, self-loop, duplicate edge, bad mark."""


class PreconditionError(ValueError):
    """An operation was called outside its documented contract."""


class CapacityError(RuntimeError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, message: str, limit: int | None = None):
        super().__init__(message)
        self.limit = limit


class InternalInvariantError(AssertionError):
    """A property the algorithms guarantee failed to hold; indicates a bug."""
