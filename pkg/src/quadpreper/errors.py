"""Exception hierarchy shared by all modules.

Each exception carries the CLI exit code it maps to, so the command layer
can translate failures without a lookup table.
"""

from __future__ import annotations


class QuadPreperError(Exception):
    exit_code = 1


class UsageError(QuadPreperError, ValueError):
    exit_code = 2


class FieldError(UsageError):
    """Invalid field descriptor or an element that does not parse."""


class FieldMismatchError(FieldError):
    """Two genuinely quadratic elements from different fields were combined."""


class LimitError(UsageError):
    """A requested size is outside the supported range."""


class ConsistencyError(QuadPreperError, ArithmeticError):
    """An internal exactness check failed (for example a nonzero remainder)."""


class ResourceGuardError(QuadPreperError):
    exit_code = 3


class BoxTooLargeError(ResourceGuardError):
    """The enumeration box exceeds the configured cardinality limit."""


class DataIntegrityError(QuadPreperError):
    exit_code = 5


class GraphError(QuadPreperError, ValueError):
    """A vertex set is not closed under the map, or a graph is malformed."""


class GeneratorSpecError(GraphError):
    """A closure request cannot be realised by any admissible graph."""


class CuspError(QuadPreperError, ValueError):
    """Parameters sit on a degenerate locus; ``factor`` names the vanishing factor."""

    def __init__(self, factor: str, message: str | None = None):
        super().__init__(message or f"parameters lie on the cusp locus: {factor} = 0")
        self.factor = factor


class OffCurveError(QuadPreperError, ValueError):
    """Parameters do not satisfy the defining equation of the curve."""


class NotSmoothError(QuadPreperError, ValueError):
    """The polynomial has a repeated factor so the model is singular."""


class BadReductionError(QuadPreperError, ValueError):
    """The model does not have good reduction at the requested prime."""


class RationalValueError(QuadPreperError, ValueError):
    """The value is already a rational square, so no quadratic point arises."""
