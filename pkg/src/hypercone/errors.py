"""Exception types raised across the package.

Every error condition named in a function contract maps to one class here so
callers can catch precisely what they care about; everything derives from
``HyperconeError``.
"""


class HyperconeError(Exception):
    """Base class for all package-specific errors."""


class ZeroVectorError(HyperconeError):
    """An angular operation received a vector with norm at or below the zero guard."""


class EmptySetError(HyperconeError):
    """An operation that needs at least one point received none."""


class DimensionMismatchError(HyperconeError):
    """Operands disagree on vector dimension or shape."""


class KTooLargeError(HyperconeError):
    """Requested neighbor count exceeds the available neighbors."""


class EmptyConeError(HyperconeError):
    """A radial boundary was requested for a cone with no member distances."""


class EmptyScoresError(HyperconeError):
    """A percentile or metric was requested over an empty score list."""


class LabelMismatchError(HyperconeError):
    """Train/test label universes disagree or labels are malformed."""


class ClassTooSmallError(HyperconeError):
    """A per-class operation needs more observations than the class has."""


class DegenerateRangeError(HyperconeError):
    """A uniform reference cannot be drawn because the value range collapses."""


class InvalidSpecError(HyperconeError):
    """A generator spec violates its own invariants."""


class InvalidRangeError(HyperconeError):
    """A numeric range parameter is empty or inverted."""


class InvalidConfigError(HyperconeError):
    """A build configuration field is outside its documented range."""


class BadMagicError(HyperconeError):
    """A binary file does not start with the expected magic bytes."""


class UnsupportedDtypeError(HyperconeError):
    """A file stores an element type the parsers refuse to coerce."""


class NonFiniteError(HyperconeError):
    """Input data contains NaN or infinite entries."""


class ShapeMismatchError(HyperconeError):
    """Parsed data has the wrong dimensionality or inconsistent rows."""


class TruncatedError(HyperconeError):
    """A binary file ended before its declared payload was complete."""


class VersionUnsupportedError(HyperconeError):
    """A file declares a format version this build cannot read."""
