"""Exceptions shared across the package."""


class SpectralError(ValueError):
    """Base class for all errors raised by spectrapair."""


class PreconditionError(SpectralError):
    """An operation was called on input violating its documented precondition."""


class InvalidPartitionError(SpectralError):
    """A congruence partition violates one of its invariants.

    The ``invariant`` attribute names the violated property so that callers
    (and the CLI) can report it.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"invalid partition: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NotIsoSpectralError(PreconditionError):
    """Two measures could not be verified to share the requested spectrum."""
