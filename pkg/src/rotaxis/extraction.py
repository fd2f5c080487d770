"""Recover the rotation axis from a matrix, then the full axis-angle pair.

The fixed axis satisfies ``R n = n``. Rather than calling a general eigensolver
we read it off closed-form pieces of the Rodrigues expansion:

* ``(R - R^T) / 2 = sin(t) N``, so the vee of the antisymmetric part is
  ``sin(t) n``. Good whenever ``|sin(t)|`` is not tiny.
* ``(R + R^T) / 2 = cos(t) I + (1 - cos(t)) n n^T``, so near a half turn,
  where the antisymmetric part vanishes, ``n n^T`` comes from the symmetric
  part.

The angle is then always taken from :func:`angle_for_axis` with the extracted
axis, never from ``arccos`` alone.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import (
    AxisAngle,
    RotationMatrix,
    UnitVector3,
    Vector3,
    Z_AXIS,
    angle_for_axis,
    as_rotation,
    axis_residual,
    cos_theta_from_trace,
    rotation_from_axis_angle,
)
from .errors import IdentityRotation

RECONSTRUCTION_TOL = 1e-9


class DegeneracyClass(enum.Enum):
    GENERIC = "Generic"
    NEAR_ZERO_ANGLE = "NearZeroAngle"
    NEAR_PI_ANGLE = "NearPiAngle"


@dataclass(frozen=True)
class Thresholds:
    """Regime boundaries for axis extraction.

    sin_threshold
        ``|sin(t)|`` at or above this uses the antisymmetric part (Generic).
    pi_threshold
        ``cos(t) < -1 + pi_threshold`` (with small sine) uses the symmetric part.
    zero_threshold
        ``|sin(t)|`` at or below this, away from a half turn, is the identity.
    sign_epsilon
        Components smaller than this are skipped when fixing the sign of a
        near-half-turn axis.
    """

    sin_threshold: float = 1e-4
    pi_threshold: float = 1e-8
    zero_threshold: float = 1e-12
    sign_epsilon: float = 1e-12


DEFAULT_THRESHOLDS = Thresholds()


@dataclass(frozen=True)
class ConversionReport:
    result: AxisAngle
    degeneracy: DegeneracyClass
    residual_axis: float
    residual_reconstruction: float
    branch_note: str

    @property
    def accepted(self) -> bool:
        return self.residual_reconstruction <= RECONSTRUCTION_TOL


def antisymmetric_vee(r: RotationMatrix) -> Vector3:
    """Vee of ``(R - R^T) / 2``, which equals ``sin(t) n``."""
    m = r.m
    return Vector3((m[7] - m[5]) / 2.0, (m[2] - m[6]) / 2.0, (m[3] - m[1]) / 2.0)


def _axis_from_symmetric_part(r: RotationMatrix, cos_t: float, sign_epsilon: float) -> UnitVector3:
    m = r.m
    k = 1.0 - cos_t
    # n n^T = (sym(R) - cos(t) I) / (1 - cos(t))
    b00 = (m[0] - cos_t) / k
    b11 = (m[4] - cos_t) / k
    b22 = (m[8] - cos_t) / k
    b01 = (m[1] + m[3]) / (2.0 * k)
    b02 = (m[2] + m[6]) / (2.0 * k)
    b12 = (m[5] + m[7]) / (2.0 * k)
    if b00 >= b11 and b00 >= b22:
        col = (b00, b01, b02)
    elif b11 >= b22:
        col = (b01, b11, b12)
    else:
        col = (b02, b12, b22)
    axis = UnitVector3.normalized(col)
    for comp in axis:
        if abs(comp) > sign_epsilon:
            return axis if comp > 0.0 else -axis
    return axis


def extract_axis(
    r: RotationMatrix, thresholds: Thresholds = DEFAULT_THRESHOLDS
) -> tuple[UnitVector3, DegeneracyClass]:
    """Unit axis fixed by ``r`` and the regime used to find it.

    Sign convention: for Generic and NearZeroAngle the vee of the
    antisymmetric part is used as-is, so ``sin(t) > 0`` and the angle lands
    in (0, pi). For NearPiAngle the first non-negligible component is made
    positive.

    Raises :class:`IdentityRotation` when the rotation is indistinguishable
    from the identity, since then every vector is fixed.
    """
    r = as_rotation(r)
    cos_t = cos_theta_from_trace(r)
    w = antisymmetric_vee(r)
    sin_mag = w.norm()
    if sin_mag >= thresholds.sin_threshold:
        return UnitVector3.normalized(w), DegeneracyClass.GENERIC
    if cos_t < -1.0 + thresholds.pi_threshold:
        return _axis_from_symmetric_part(r, cos_t, thresholds.sign_epsilon), DegeneracyClass.NEAR_PI_ANGLE
    if sin_mag <= thresholds.zero_threshold:
        raise IdentityRotation(f"rotation is the identity (|sin t| = {sin_mag:.1e}); axis undefined")
    return UnitVector3.normalized(w), DegeneracyClass.NEAR_ZERO_ANGLE


_NOTES = {
    DegeneracyClass.GENERIC: "axis from antisymmetric part; sin(theta) > 0 branch",
    DegeneracyClass.NEAR_ZERO_ANGLE: "small angle; axis from antisymmetric part; sin(theta) > 0 branch",
    DegeneracyClass.NEAR_PI_ANGLE: "near half turn; axis from symmetric part; first nonzero component positive",
}


def matrix_to_axis_angle(r, thresholds: Thresholds = DEFAULT_THRESHOLDS) -> ConversionReport:
    """Convert a rotation matrix (or anything :meth:`RotationMatrix.of` accepts).

    The identity maps to the conventional ``((0, 0, 1), 0)``. Otherwise the
    result is the branch picked by :func:`extract_axis`; the other valid
    answer is ``report.result.negated()``.
    """
    r = as_rotation(r)
    try:
        axis, degeneracy = extract_axis(r, thresholds)
    except IdentityRotation:
        result = AxisAngle(Z_AXIS, 0.0)
        degeneracy = DegeneracyClass.NEAR_ZERO_ANGLE
        note = "identity rotation; conventional axis (0, 0, 1)"
    else:
        result = AxisAngle(axis, angle_for_axis(axis, r))
        note = _NOTES[degeneracy]
    recon = rotation_from_axis_angle(result)
    return ConversionReport(
        result=result,
        degeneracy=degeneracy,
        residual_axis=axis_residual(result.axis, r),
        residual_reconstruction=r.max_abs_diff(recon),
        branch_note=note,
    )
