"""Shared exception types.

Exit-code mapping used by the CLI: usage and malformed input -> 1,
identity violation -> 2, resource guard -> 3.
"""

from __future__ import annotations

__all__ = [
    "DimensionMismatchError",
    "GuardExceededError",
    "IdentityViolationError",
    "SetFileError",
]


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


class SetFileError(ValueError):
    """Point-set file is malformed (bad header, bad digits, duplicates)."""


class GuardExceededError(RuntimeError):
    """A resource guard (dimension / enumeration size) was exceeded.

    Guards exist so desk-scale commands fail fast instead of thrashing.
    Most carry a force override; the hard ceilings do not.
    """


class IdentityViolationError(RuntimeError):
    """An exact identity that must hold failed.

    This always indicates a bug (or memory corruption), never bad input,
    so it is loud and carries both sides of the failed identity.
    """

    def __init__(self, what: str, lhs: object, rhs: object):
        self.what = what
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{what}: {lhs} != {rhs}")
