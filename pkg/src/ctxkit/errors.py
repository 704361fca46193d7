"""Exception hierarchy shared by every ctxkit module."""

from __future__ import annotations


class CtxkitError(Exception):
    """Base class for ctxkit failures."""


class InputError(CtxkitError, ValueError):
    """Malformed or inconsistent input data."""


class TooLargeError(CtxkitError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, cardinality: int, limit: int, what: str = "assignments"):
        self.cardinality = cardinality
        self.limit = limit
        super().__init__(f"refusing to enumerate {cardinality} {what} (limit {limit})")


class UnsupportedError(CtxkitError):
    """The operation is not defined for this input (e.g. non-dichotomic holonomy)."""
