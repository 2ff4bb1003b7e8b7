"""
Exception hierarchy shared by the library, the CLI and the MCP server.

Every error derives from :class:`GKMError` and, where it makes sense, from the builtin
exception a caller would naturally catch.
"""

from typing import Iterable, Optional, Sequence


class GKMError(Exception):
    """Base class for all errors raised by gkm_localization."""


class DivisionByZeroError(GKMError, ZeroDivisionError):
    """Division by an identically zero rational function."""


class RankMismatchError(GKMError, ValueError):
    """Operands live in parameter rings of different rank."""


class GraphMismatchError(GKMError, ValueError):
    """Classes or curve data belonging to different graphs were combined."""


class InvalidGraphError(GKMError, ValueError):
    """A graph failed structural checks or the GKM axioms."""

    def __init__(self, message: str, violations: Optional[Iterable[object]] = None):
        super().__init__(message)
        self.violations = list(violations or [])


class NonCompactGraphError(GKMError, ValueError):
    """An operation needing a compact graph received one with extra flags."""


class NoCompatibleConnectionError(GKMError):
    """No compatible connection exists along some edge."""


class CurveClassError(GKMError, ValueError):
    """Inconsistent curve-class data: torsion, unknown edges, bad coordinates."""


class UnboundedDecompositionError(GKMError):
    """The projection has a non-negative kernel vector, so decompositions are infinite."""

    def __init__(self, message: str, kernel_vector: Sequence[int]):
        super().__init__(message)
        self.kernel_vector = tuple(kernel_vector)


class LocalizationError(GKMError):
    """Bad insertions or unsupported psi-class placements."""


class NotGKMClassError(GKMError, ValueError):
    """A tuple of vertex values violates the GKM divisibility criterion."""


class PositivityError(GKMError):
    """Truncated quantum products need positive or almost positive Chern numbers."""


class NotApplicableError(GKMError):
    """The realizability test has no edge meeting its hypotheses."""


class BettiSearchError(GKMError):
    """No generic direction was found within the configured search bound."""
