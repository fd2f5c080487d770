"""Consistent axis-angle tracks for streams of rotations.

Each matrix has two valid readings, ``(n, t)`` and ``(-n, -t)``. When the axis
drifts slowly the useful one is the reading whose axis stays closest to the
previous sample's, i.e. the one with the larger inner product.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from .core import (
    AxisAngle,
    RotationMatrix,
    UnitVector3,
    Z_AXIS,
    angle_for_axis,
    as_rotation,
    rotation_from_axis_angle,
)
from .errors import IdentityRotation, NonRotationInput, StreamError
from .extraction import DEFAULT_THRESHOLDS, DegeneracyClass, Thresholds, extract_axis

# (previous axis or None, extractor's axis) -> (chosen axis, flipped)
Strategy = Callable[[Optional[UnitVector3], UnitVector3], "tuple[UnitVector3, bool]"]


@dataclass(frozen=True)
class ContinuityState:
    previous_axis: Optional[UnitVector3] = None
    sample_index: int = 0


@dataclass(frozen=True)
class TrackSample:
    index: int
    axis_angle: AxisAngle
    flipped: bool
    axis_dot_previous: Optional[float]
    degeneracy: DegeneracyClass
    residual_reconstruction: float


def largest_inner_product(previous: Optional[UnitVector3], axis: UnitVector3) -> tuple[UnitVector3, bool]:
    """Keep ``axis`` unless ``-axis`` is strictly closer to ``previous``."""
    if previous is None or axis.dot(previous) >= 0.0:
        return axis, False
    return -axis, True


def resolve_with_previous(
    state: ContinuityState,
    r,
    strategy: Strategy = largest_inner_product,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> tuple[TrackSample, ContinuityState]:
    """Resolve one matrix against the running state.

    Identity rotations carry no axis information: they emit angle 0 about
    the previous axis (or ``(0, 0, 1)`` if there is none) and leave the state's
    axis untouched.
    """
    r = as_rotation(r)
    previous = state.previous_axis
    index = state.sample_index
    try:
        raw_axis, degeneracy = extract_axis(r, thresholds)
    except IdentityRotation:
        axis = previous if previous is not None else Z_AXIS
        aa = AxisAngle(axis, 0.0)
        sample = TrackSample(
            index=index,
            axis_angle=aa,
            flipped=False,
            axis_dot_previous=None if previous is None else axis.dot(previous),
            degeneracy=DegeneracyClass.NEAR_ZERO_ANGLE,
            residual_reconstruction=r.max_abs_diff(rotation_from_axis_angle(aa)),
        )
        return sample, ContinuityState(previous, index + 1)

    axis, flipped = strategy(previous, raw_axis)
    aa = AxisAngle(axis, angle_for_axis(axis, r))
    sample = TrackSample(
        index=index,
        axis_angle=aa,
        flipped=flipped,
        axis_dot_previous=None if previous is None else axis.dot(previous),
        degeneracy=degeneracy,
        residual_reconstruction=r.max_abs_diff(rotation_from_axis_angle(aa)),
    )
    return sample, ContinuityState(axis, index + 1)


def resolve_stream(
    rs: Iterable,
    state: Optional[ContinuityState] = None,
    strategy: Strategy = largest_inner_product,
    thresholds: Thresholds = DEFAULT_THRESHOLDS,
) -> list[TrackSample]:
    """Fold :func:`resolve_with_previous` over ``rs`` in order.

    Raises :class:`StreamError` (carrying the position) on the first matrix
    that is not a valid rotation.
    """
    state = state or ContinuityState()
    samples = []
    for i, r in enumerate(rs):
        if not isinstance(r, RotationMatrix):
            try:
                r = RotationMatrix.of(r)
            except NonRotationInput as exc:
                raise StreamError(i, exc) from exc
        sample, state = resolve_with_previous(state, r, strategy, thresholds)
        samples.append(sample)
    return samples
