"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit codes: ``DomainError`` (and subclasses) -> 2,
``CapacityError`` -> 3.
"""

from __future__ import annotations


class TreeBoundError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TreeBoundError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(TreeBoundError):
    """The requested size is beyond what the exhaustive scan supports."""


class StabilityError(DomainError):
    """The stability certificate does not hold.

    ``subset`` is the first violating vertex subset (0-indexed).
    """

    def __init__(self, subset: tuple[int, ...], message: str | None = None):
        self.subset = tuple(subset)
        if message is None:
            shown = ", ".join(str(v + 1) for v in self.subset)
            message = f"stability condition violated on subset {{{shown}}}"
        super().__init__(message)


class InstanceError(DomainError):
    """Malformed or invalid instance file."""
