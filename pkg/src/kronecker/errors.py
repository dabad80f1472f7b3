"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class KroneckerError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(KroneckerError, ValueError):
    """Incompatible shapes or fields passed to a linear-algebra routine."""


class DomainError(KroneckerError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RefusalError(KroneckerError):
    """An exhaustive enumeration would exceed its configured bound.

    ``required`` is the size of the requested enumeration and ``limit`` the
    bound that refused it.
    """

    def __init__(self, what: str, required: int, limit: int):
        self.what = what
        self.required = int(required)
        self.limit = int(limit)
        super().__init__(f"{what}: enumeration size {self.required} exceeds bound {self.limit}")


class SearchExhausted(KroneckerError):
    """A bounded search terminated without finding what it looked for."""
