"""Exception types shared across the package."""


class SpecseqError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(SpecseqError, ZeroDivisionError):
    """Division by the zero element of a field."""


class MixedFields(SpecseqError):
    """Operands belong to two different coefficient fields."""


class AmbientMismatch(SpecseqError):
    """Subspaces or matrices live in ambient spaces of different dimension."""


class NotASubspace(SpecseqError):
    """A vector or subspace is not contained where the operation requires."""


class NotWellDefined(SpecseqError):
    """A map does not descend to the requested quotient presentation."""


class NotAComplex(SpecseqError):
    """Consecutive differentials do not compose to zero."""


class NotASubcomplex(SpecseqError):
    """A simplicial complex is not contained in the claimed host."""


class NotNested(SpecseqError):
    """Chain map images do not form a nested family."""


class NotFiniteDimensional(SpecseqError):
    """No power of the maximal ideal vanishes below the requested bound."""


class ComparisonFailure(SpecseqError):
    """A limit comparison disagreed; this signals a bug, not bad input."""


class ParseError(SpecseqError):
    """Malformed textual input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
