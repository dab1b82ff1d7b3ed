"""
Errors — Container Lab
======================

Exception hierarchy shared by every module.  Parameter problems subclass
``ValueError`` so callers that only know the builtin types still catch them.
"""

from __future__ import annotations

from typing import Any, Optional


class ContainerLabError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(ContainerLabError, ValueError):
    """Invalid parameters for a graph kind, bound, schedule or permutation."""


class GroundSetError(ParameterError):
    """A mask does not fit the ground set, or two ground sets disagree."""


class GraphSpecError(ParameterError):
    """A graph spec string such as ``tilt:n=5,p=1,q=2`` could not be parsed."""


class NotIndependentError(ContainerLabError, ValueError):
    """A family expected to be independent in a graph contains an edge."""

    def __init__(self, message: str, edge: Optional[tuple] = None):
        super().__init__(message)
        self.edge = edge


class InvalidFingerprint(ContainerLabError):
    """Replay could not consume every vertex of a candidate fingerprint."""


class EmptyFamilyError(ContainerLabError, ValueError):
    """An operation that needs at least one member received an empty family."""


class FamilyFormatError(ContainerLabError, ValueError):
    """A family text file is malformed."""

    def __init__(self, message: str, path: str = "", line: int = 0):
        where = f"{path}:{line}: " if path else (f"line {line}: " if line else "")
        super().__init__(f"{where}{message}")
        self.path = path
        self.line = line


class BudgetExceeded(ContainerLabError):
    """
    An enumeration ran past its EnumBudget.

    ``partial`` carries whatever progress the operation could report
    (for example the number of independent sets counted so far).
    """

    def __init__(self, message: str, nodes: int = 0, elapsed: float = 0.0,
                 partial: Any = None):
        super().__init__(message)
        self.nodes = nodes
        self.elapsed = elapsed
        self.partial = partial
