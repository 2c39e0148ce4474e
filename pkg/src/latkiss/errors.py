"""Exception types shared across the package."""

from __future__ import annotations


class LatkissError(Exception):
    """Base class for all package errors."""


class FormatError(LatkissError):
    """Malformed input: bad row lengths, bad DSL text, bad vector dimension."""


class DegenerateCode(LatkissError):
    """Generator rows span only the zero vector."""


class ResourceLimit(LatkissError):
    """An enumeration guard was exceeded.

    Carries the offending size in .size when known.
    """

    def __init__(self, message: str, size: int | None = None):
        super().__init__(message)
        self.size = size


class InvalidParameter(LatkissError):
    """Parameter outside its admissible range (e.g. t < 2)."""


class InvalidGauge(LatkissError):
    """Gauge specification is not a valid Minkowski distance function."""


class PartitionError(LatkissError):
    """Block coordinate lists do not partition the ambient coordinates."""


class DomainError(LatkissError):
    """Argument outside the mathematical domain of a function."""


class NumericalError(LatkissError):
    """A numerical procedure failed to converge or bracket."""


class NotInLattice(LatkissError):
    """Vector is not an element of the lattice."""


class InsufficientBlocks(LatkissError):
    """Too few blocks share a gauge family and exponent to embed the code."""


class MonotonicityError(LatkissError):
    """No candidate pivot coordinate passes the monotonicity condition.

    Carries the failing witness vector in .witness.
    """

    def __init__(self, message: str, witness: tuple[float, ...] | None = None):
        super().__init__(message)
        self.witness = witness


class DecompositionAnomaly(LatkissError):
    """A lattice vector's fractional support is smaller than the code distance.

    Carries the offending vector (as exact Fractions) in .vector and the
    fractional-part support size in .support.
    """

    def __init__(self, message: str, vector=None, support: int | None = None):
        super().__init__(message)
        self.vector = vector
        self.support = support
