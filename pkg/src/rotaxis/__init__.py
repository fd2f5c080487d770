"""Rotation matrix <-> axis-angle conversion with sign-consistent angle recovery."""

from .core import (
    AxisAngle,
    RotationMatrix,
    SkewMatrix,
    UnitVector3,
    Vector3,
    Z_AXIS,
    angle_for_axis,
    cos_theta_from_trace,
    decompose,
    rotate_vector,
    rotation_from_axis_angle,
    sin_theta_from_skew_product,
    skew,
    wrap_angle,
)
from .errors import (
    AxisNotInvariant,
    IdentityRotation,
    NonRotationInput,
    NonUnitAxis,
    RotationError,
    StreamError,
    TraceOutOfRange,
)
from .extraction import (
    ConversionReport,
    DegeneracyClass,
    Thresholds,
    extract_axis,
    matrix_to_axis_angle,
)
from .trajectory import (
    ContinuityState,
    TrackSample,
    largest_inner_product,
    resolve_stream,
    resolve_with_previous,
)

__version__ = "0.1.0"
