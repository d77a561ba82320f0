"""Exception types raised by the engine.

Validation failures carry a ``path`` locating the offending field of the
input document, so the command line can report actionable diagnostics.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all engine errors."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(message if path is None else f"{path}: {message}")


class ShapeMismatch(EngineError):
    """Tensor operands have incompatible dimensions."""


class Singular(EngineError):
    """A matrix that must be inverted has determinant zero."""


class NotAntisymmetric(EngineError):
    """Structure constants (or a form) fail antisymmetry."""


class JacobiViolation(EngineError):
    """Structure constants violate the Jacobi identity."""

    def __init__(self, violations, path=None):
        self.violations = violations
        triples = ", ".join(str(t) for t, _ in violations[:3])
        more = "" if len(violations) <= 3 else f" (+{len(violations) - 3} more)"
        super().__init__(f"Jacobi identity fails at triples {triples}{more}", path)


class JSquaredNotMinusIdentity(EngineError):
    """The candidate almost complex structure does not square to -Id."""


class MetricNotPositiveDefinite(EngineError):
    """The candidate metric has a nonpositive leading principal minor."""


class NotTamed(EngineError):
    """The 2-form does not tame J: the symmetrized metric is not positive."""


class OddDimension(EngineError):
    """Almost complex structures need an even-dimensional algebra."""


class UnknownExample(EngineError):
    """Requested builtin fixture does not exist."""


class UnsupportedField(EngineError):
    """covariant_derivative received a field it cannot differentiate."""


class DegenerateDimension(EngineError):
    """An invariant is undefined in complex dimension 1."""


class NotQuasiKahler(EngineError):
    """Operation requires a quasi Kahler triple."""


class NotAlmostKahler(EngineError):
    """Operation requires an almost Kahler triple."""


class HypothesisFailed(EngineError):
    """A theorem decision procedure was run outside its hypotheses."""


class WrongDimension(EngineError):
    """Operation is only defined in a specific dimension."""


class NotApplicable(EngineError):
    """The normalization does not apply (integrable J or abelian algebra)."""


class PivotNotFound(EngineError):
    """Internal contradiction: the normalization pivot guaranteed by the
    Jacobi identity is missing.  Indicates an engine bug."""


class DocumentError(EngineError):
    """A structure document is malformed (syntax or schema)."""
