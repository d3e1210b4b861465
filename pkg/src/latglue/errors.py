"""Exception types shared by every module and mapped to CLI exit codes."""


class DomainError(ValueError):
    """Input outside an operation's domain (bad index range, degenerate Gram, ...)."""


class ResourceError(RuntimeError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, message: str, required: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class VerificationError(Exception):
    """A finitely checkable claim failed on the computed data."""
