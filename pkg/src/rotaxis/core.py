"""Rodrigues rotation formula and its inverse for a given axis.

Value types are small immutable dataclasses over plain floats. Every formula is
written out index by index on row-major storage, which is both unambiguous and
several times faster than numpy for a single 3x3 matrix.

The angle recovery works in two halves:

* ``cos(theta) = (tr(R) - 1) / 2`` does not depend on the axis;
* ``sin(theta) = -tr(N R) / 2`` does, where ``N`` is the cross-product matrix
  of the chosen axis.

Together they pin theta through ``atan2`` for whichever sign of the axis the
caller picked, so no branch guessing is needed afterwards.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import AxisNotInvariant, NonRotationInput, NonUnitAxis, TraceOutOfRange

# Default tolerances
UNIT_NORM_TOL = 1e-12
ORTHOGONALITY_TOL = 1e-9
CLAMP_SLACK = 1e-9
AXIS_INVARIANCE_TOL = 1e-6

_IDENTITY = (1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Vector3:
    """A general 3-vector with finite components."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.z)):
            raise ValueError(f"non-finite vector component in {(self.x, self.y, self.z)}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Vector3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    def __iter__(self) -> Iterator[float]:
        yield self.x
        yield self.y
        yield self.z

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __add__(self, other: "Vector3") -> "Vector3":
        return Vector3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vector3") -> "Vector3":
        return Vector3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> "Vector3":
        return Vector3(-self.x, -self.y, -self.z)

    def scaled(self, k: float) -> "Vector3":
        return Vector3(k * self.x, k * self.y, k * self.z)

    def dot(self, other: "Vector3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def cross(self, other: "Vector3") -> "Vector3":
        return Vector3(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class UnitVector3(Vector3):
    """A unit-norm 3-vector, checked at construction.

    Use :meth:`normalized` to build one from an arbitrary nonzero vector.
    """

    def __post_init__(self):
        Vector3.__post_init__(self)
        sq = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(sq - 1.0) > UNIT_NORM_TOL:
            raise NonUnitAxis(f"axis {(self.x, self.y, self.z)} has squared norm {sq!r}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "UnitVector3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)

    @classmethod
    def normalized(cls, values: Iterable[float]) -> "UnitVector3":
        x, y, z = (float(v) for v in values)
        norm = math.sqrt(x * x + y * y + z * z)
        if not math.isfinite(norm) or norm == 0.0:
            raise NonUnitAxis(f"cannot normalize {(x, y, z)}")
        return cls(x / norm, y / norm, z / norm)

    def __neg__(self) -> "UnitVector3":
        return UnitVector3(-self.x, -self.y, -self.z)


Z_AXIS = UnitVector3(0.0, 0.0, 1.0)


def _flatten9(values) -> tuple[float, ...]:
    arr = np.asarray(values, dtype=float)
    if arr.shape not in ((9,), (3, 3)):
        raise NonRotationInput(f"expected 9 values or a 3x3 array, got shape {arr.shape}")
    return tuple(float(v) for v in arr.reshape(9))


@dataclass(frozen=True)
class RotationMatrix:
    """A proper orthogonal 3x3 matrix stored row-major in ``m``.

    Validated once at construction: ``max|R^T R - I| <= tol`` and
    ``|det R - 1| <= tol``, with ``tol`` defaulting to 1e-9. Anything else
    raises :class:`NonRotationInput`; inputs are never re-orthogonalized.
    """

    m: tuple[float, ...]
    tol: float = field(default=ORTHOGONALITY_TOL, compare=False, repr=False)

    def __post_init__(self):
        m = self.m
        if len(m) != 9:
            raise NonRotationInput(f"expected 9 entries, got {len(m)}")
        if not all(map(math.isfinite, m)):
            raise NonRotationInput("matrix has non-finite entries")
        a, b, c, d, e, f, g, h, i = m
        # R^T R, upper triangle
        g00 = a * a + d * d + g * g
        g11 = b * b + e * e + h * h
        g22 = c * c + f * f + i * i
        g01 = a * b + d * e + g * h
        g02 = a * c + d * f + g * i
        g12 = b * c + e * f + h * i
        err = max(abs(g00 - 1.0), abs(g11 - 1.0), abs(g22 - 1.0), abs(g01), abs(g02), abs(g12))
        if err > self.tol:
            raise NonRotationInput(f"matrix is not orthogonal: max|R^T R - I| = {err:.3e}")
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        if abs(det - 1.0) > self.tol:
            raise NonRotationInput(f"matrix is not a proper rotation: det = {det!r}")

    @classmethod
    def of(cls, values, tol: float = ORTHOGONALITY_TOL) -> "RotationMatrix":
        """Build from 9 row-major values, nested rows, or a numpy array."""
        if isinstance(values, RotationMatrix):
            return values
        return cls(_flatten9(values), tol)

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(_IDENTITY)

    def __getitem__(self, ij: tuple[int, int]) -> float:
        i, j = ij
        return self.m[3 * i + j]

    def rows(self) -> list[list[float]]:
        m = self.m
        return [list(m[0:3]), list(m[3:6]), list(m[6:9])]

    def as_array(self) -> np.ndarray:
        return np.array(self.m).reshape(3, 3)

    def trace(self) -> float:
        return self.m[0] + self.m[4] + self.m[8]

    def transpose(self) -> "RotationMatrix":
        a, b, c, d, e, f, g, h, i = self.m
        return RotationMatrix((a, d, g, b, e, h, c, f, i), self.tol)

    def apply(self, v: Vector3) -> Vector3:
        a, b, c, d, e, f, g, h, i = self.m
        x, y, z = v.x, v.y, v.z
        return Vector3(a * x + b * y + c * z, d * x + e * y + f * z, g * x + h * y + i * z)

    def max_abs_diff(self, other: "RotationMatrix") -> float:
        return max(map(abs, map(operator.sub, self.m, other.m)))


@dataclass(frozen=True)
class SkewMatrix:
    """Cross-product matrix of a unit axis: ``N v == n x v``.

    Only :func:`skew` should construct one; antisymmetry holds by construction.
    """

    m: tuple[float, ...]

    def vee(self) -> Vector3:
        m = self.m
        return Vector3(m[7], m[2], m[3])

    def apply(self, v: Vector3) -> Vector3:
        _, a, b, c, _, d, e, f, _ = self.m
        return Vector3(a * v.y + b * v.z, c * v.x + d * v.z, e * v.x + f * v.y)

    def squared(self) -> tuple[float, ...]:
        """Row-major entries of ``N N`` (equal to ``n n^T - I`` for a unit axis)."""
        n1, n2, n3 = self.m[7], self.m[2], self.m[3]
        return (
            -n3 * n3 - n2 * n2, n1 * n2, n1 * n3,
            n1 * n2, -n3 * n3 - n1 * n1, n2 * n3,
            n1 * n3, n2 * n3, -n2 * n2 - n1 * n1,
        )

    def as_array(self) -> np.ndarray:
        return np.array(self.m).reshape(3, 3)


@dataclass(frozen=True)
class AxisAngle:
    """A rotation by ``angle`` radians, counter-clockwise about ``axis``.

    ``(axis, angle)`` and ``(-axis, -angle)`` describe the same rotation.
    """

    axis: UnitVector3
    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError(f"non-finite angle {self.angle!r}")

    def canonical(self) -> "AxisAngle":
        """Same rotation with the angle wrapped into (-pi, pi]."""
        return AxisAngle(self.axis, wrap_angle(self.angle))

    def negated(self) -> "AxisAngle":
        """The other valid branch, ``(-axis, -angle)``."""
        return AxisAngle(-self.axis, -self.angle)


def wrap_angle(angle: float) -> float:
    """Wrap to (-pi, pi]."""
    wrapped = math.pi - (math.pi - angle) % (2.0 * math.pi)
    # the modulo can land on -pi for inputs a hair above pi
    return math.pi if wrapped <= -math.pi else wrapped


def skew(axis: UnitVector3) -> SkewMatrix:
    n1, n2, n3 = axis.x, axis.y, axis.z
    return SkewMatrix((
        0.0, -n3, n2,
        n3, 0.0, -n1,
        -n2, n1, 0.0,
    ))


def rotation_from_axis_angle(aa: AxisAngle, tol: float = ORTHOGONALITY_TOL) -> RotationMatrix:
    """Rodrigues synthesis, ``R = I + sin(t) N + (1 - cos(t)) N N``."""
    s = math.sin(aa.angle)
    k = 1.0 - math.cos(aa.angle)
    N = skew(aa.axis)
    n = N.m
    nn = N.squared()
    return RotationMatrix((
        1.0 + s * n[0] + k * nn[0], s * n[1] + k * nn[1], s * n[2] + k * nn[2],
        s * n[3] + k * nn[3], 1.0 + s * n[4] + k * nn[4], s * n[5] + k * nn[5],
        s * n[6] + k * nn[6], s * n[7] + k * nn[7], 1.0 + s * n[8] + k * nn[8],
    ), tol)


def rotate_vector(aa: AxisAngle, v: Vector3) -> Vector3:
    """Vector form of Rodrigues: ``(1-c) n (n.v) + c v + s n x v``.

    Deliberately avoids building a matrix, so it can be checked against
    ``rotation_from_axis_angle(aa).apply(v)``.
    """
    n = aa.axis
    c = math.cos(aa.angle)
    s = math.sin(aa.angle)
    k = (1.0 - c) * n.dot(v)
    w = n.cross(v)
    return Vector3(
        k * n.x + c * v.x + s * w.x,
        k * n.y + c * v.y + s * w.y,
        k * n.z + c * v.z + s * w.z,
    )


def decompose(axis: UnitVector3, v: Vector3) -> tuple[Vector3, Vector3]:
    """Split ``v`` into its components along and across ``axis``.

    The parallel part is ``n (n.v)``; the perpendicular part is
    ``-n x (n x v)``, computed directly rather than as ``v - parallel``.
    """
    parallel = axis.scaled(axis.dot(v))
    perpendicular = -axis.cross(axis.cross(v))
    return parallel, perpendicular


def _clamp_unit(raw: float, what: str, slack: float) -> float:
    if raw > 1.0:
        if raw - 1.0 > slack:
            raise TraceOutOfRange(f"{what} = {raw!r} exceeds 1; input is not a rotation")
        return 1.0
    if raw < -1.0:
        if -1.0 - raw > slack:
            raise TraceOutOfRange(f"{what} = {raw!r} is below -1; input is not a rotation")
        return -1.0
    return raw


def _slack(r: RotationMatrix) -> float:
    # a matrix accepted at a looser tolerance may legitimately overshoot by that much
    return max(CLAMP_SLACK, r.tol)


def cos_theta_from_trace(r: RotationMatrix) -> float:
    return _clamp_unit((r.m[0] + r.m[4] + r.m[8] - 1.0) / 2.0, "cos(theta)", _slack(r))


def sin_theta_from_skew_product(n: SkewMatrix, r: RotationMatrix) -> float:
    """``sin(theta) = -tr(N R) / 2`` for the axis that built ``n``."""
    N = n.m
    R = r.m
    # tr(N R) = sum_ik N[i,k] R[k,i]; the diagonal of N is zero
    tr_nr = (
        N[1] * R[3] + N[2] * R[6]
        + N[3] * R[1] + N[5] * R[7]
        + N[6] * R[2] + N[7] * R[5]
    )
    return _clamp_unit(-tr_nr / 2.0, "sin(theta)", _slack(r))


def axis_residual(axis: Vector3, r: RotationMatrix) -> float:
    """Euclidean norm of ``R n - n``."""
    a, b, c, d, e, f, g, h, i = r.m
    x, y, z = axis.x, axis.y, axis.z
    dx = a * x + b * y + c * z - x
    dy = d * x + e * y + f * z - y
    dz = g * x + h * y + i * z - z
    return math.sqrt(dx * dx + dy * dy + dz * dz)


def angle_for_axis(axis: UnitVector3, r: RotationMatrix, tol: float = AXIS_INVARIANCE_TOL) -> float:
    """Signed rotation angle of ``r`` about ``axis``, in (-pi, pi].

    Raises :class:`AxisNotInvariant` if ``|R n - n| > tol``. Negating the axis
    negates the result (except at exactly pi).
    """
    residual = axis_residual(axis, r)
    if residual > tol:
        raise AxisNotInvariant(f"|R n - n| = {residual:.3e} exceeds {tol:.1e}")
    c = cos_theta_from_trace(r)
    s = sin_theta_from_skew_product(skew(axis), r)
    theta = math.atan2(s, c)
    return math.pi if theta == -math.pi else theta


def as_rotation(r, tol: float = ORTHOGONALITY_TOL) -> RotationMatrix:
    """Coerce array-likes to :class:`RotationMatrix`, passing existing ones through."""
    return r if isinstance(r, RotationMatrix) else RotationMatrix.of(r, tol)


def as_unit(values: Sequence[float] | UnitVector3) -> UnitVector3:
    return values if isinstance(values, UnitVector3) else UnitVector3.of(values)
