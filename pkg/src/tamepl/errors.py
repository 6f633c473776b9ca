"""Exception hierarchy.

The CLI maps :class:`InputError` (and its subclasses) to exit code 2.
"""


class TameError(Exception):
    """Base class for every error raised by tamepl."""


class InputError(TameError, ValueError):
    """Malformed or inconsistent input data.

    ``path`` optionally points at the offending location of a JSON document,
    e.g. ``"complex/terms/0/edges/a->b"``.
    """

    def __init__(self, message, path=None):
        super().__init__(message)
        self.path = path

    def __str__(self):
        msg = super().__str__()
        return f"{msg} (at {self.path})" if self.path else msg


class DomainError(InputError):
    """An operation was asked for outside its domain (e.g. p not <= q)."""


class PreconditionError(InputError):
    """A documented precondition does not hold (e.g. non-compact support)."""


class InvariantError(TameError, AssertionError):
    """An internal invariant failed; indicates a bug, never bad input."""
