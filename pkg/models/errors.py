"""Exception hierarchy shared by the engine modules and mapped to exit codes by the cli."""

from __future__ import annotations


class FsplitError(Exception):
    """Root of every error the engine raises on purpose."""


class ParseError(FsplitError, ValueError):
    """Text that does not follow the polynomial, ring or facet grammar."""


class ValidationError(FsplitError, ValueError):
    """Well-formed input that violates a precondition."""


class DegreeCapExceeded(FsplitError, ArithmeticError):
    def __init__(self, degree: int, cap: int, where: str = ""):
        self.degree = degree
        self.cap = cap
        self.where = where
        suffix = f" in {where}" if where else ""
        super().__init__(f"total degree {degree} exceeds the degree cap {cap}{suffix}")


class EngineInvariantError(FsplitError, AssertionError):
    """A mathematical invariant check failed; this is an engine bug, not bad input."""
