"""Exception types shared across the package."""

from __future__ import annotations


class ArtinRigidError(Exception):
    """Base class for every error raised by this package."""


class ParseError(ArtinRigidError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class LabelError(ArtinRigidError):
    """An edge label is not an integer >= 2."""


class SizeError(ArtinRigidError):
    """Input exceeds a configured exhaustive-search cap."""


class BudgetError(ArtinRigidError):
    """A search ran past its enumeration budget."""


class PreconditionError(ArtinRigidError):
    """An operation was called outside its domain (e.g. label 2 where large type is required)."""


class CertificationError(ArtinRigidError):
    """A certificate failed independent re-verification."""


class UnresolvedBallError(ArtinRigidError):
    """A development could not decide whether two chambers coincide."""
