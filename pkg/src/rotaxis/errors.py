"""Exception hierarchy.

Every error is a ``ValueError`` so callers that only care about bad input can
catch the builtin.
"""


class RotationError(ValueError):
    """Base class for all errors raised by rotaxis."""


class NonRotationInput(RotationError):
    """The matrix is not a proper rotation (not orthogonal, or det != +1)."""


class NonUnitAxis(RotationError):
    """An axis expected to be unit length is not."""


class TraceOutOfRange(RotationError):
    """A trace-derived cosine or sine falls outside [-1, 1] beyond rounding slack."""


class AxisNotInvariant(RotationError):
    """The supplied axis is not left fixed by the rotation."""


class IdentityRotation(RotationError):
    """The rotation is the identity, so its axis is undefined."""


class StreamError(NonRotationInput):
    """A matrix in a stream failed validation. ``index`` is its position."""

    def __init__(self, index, cause):
        super().__init__(f"matrix at index {index}: {cause}")
        self.index = index
        self.cause = cause
