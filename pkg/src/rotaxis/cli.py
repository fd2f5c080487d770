"""JSON-lines front end.

Usage::

    rotaxis aa2mat    [--in PATH] [--out PATH] [--degrees]
    rotaxis mat2aa    [--in PATH] [--out PATH] [--degrees] [--track] [--prev-axis X,Y,Z] [--tol FLOAT]
    rotaxis roundtrip [--in PATH] [--out PATH] [--degrees] [--tol FLOAT]
    rotaxis bench     [--n COUNT] [--seed INT]

Input records are one JSON object per line, either
``{"matrix": [9 row-major numbers], "id": ...}`` or
``{"axis": [x, y, z], "angle": radians, "id": ...}``. Records that fail produce
``{"id": ..., "error": "..."}`` in place and processing continues.

Exit codes: 0 success, 1 any record failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
import time

import numpy as np

from .core import (
    ORTHOGONALITY_TOL,
    AxisAngle,
    RotationMatrix,
    UnitVector3,
    cos_theta_from_trace,
    rotation_from_axis_angle,
    sin_theta_from_skew_product,
    skew,
    wrap_angle,
)
from .errors import RotationError
from .extraction import RECONSTRUCTION_TOL, extract_axis, matrix_to_axis_angle
from .trajectory import ContinuityState, resolve_with_previous

EXIT_OK = 0
EXIT_RECORD_FAILURE = 1
EXIT_USAGE = 2

AXIS_UNIT_SLACK = 1e-6
BRANCH_AGREEMENT_TOL = 1e-6


class RecordError(Exception):
    """A single input record cannot be processed."""


def _number(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RecordError(f"{what} must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise RecordError(f"non-finite value in {what}")
    return value


def _numbers(value, what, count):
    if not isinstance(value, list):
        raise RecordError(f"{what} must be a list")
    if count == 9 and len(value) == 3 and all(isinstance(row, list) for row in value):
        value = [x for row in value for x in row]
    if len(value) != count:
        raise RecordError(f"{what} must have {count} numbers")
    return [_number(v, what) for v in value]


def parse_record(line: str, lineno: int):
    """Return ``(id, kind, payload)`` where kind is ``"matrix"`` or ``"axis_angle"``.

    Raises :class:`RecordError` with the record id attached as ``.record_id``.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        err = RecordError(f"malformed JSON: {exc.msg}")
        err.record_id = lineno
        raise err from None
    record_id = obj.get("id", lineno) if isinstance(obj, dict) else lineno
    try:
        if not isinstance(obj, dict):
            raise RecordError("record must be a JSON object")
        has_matrix = "matrix" in obj
        has_aa = "axis" in obj or "angle" in obj
        if has_matrix == has_aa:
            raise RecordError("record needs exactly one of 'matrix' or 'axis'+'angle'")
        if has_matrix:
            return record_id, "matrix", _numbers(obj["matrix"], "matrix", 9)
        if "axis" not in obj or "angle" not in obj:
            raise RecordError("axis-angle record needs both 'axis' and 'angle'")
        return record_id, "axis_angle", (_numbers(obj["axis"], "axis", 3), _number(obj["angle"], "angle"))
    except RecordError as err:
        err.record_id = record_id
        raise


def read_axis(values) -> UnitVector3:
    """Normalize an axis that is within 1e-6 of unit length; reject otherwise."""
    norm = math.sqrt(sum(v * v for v in values))
    if abs(norm - 1.0) > AXIS_UNIT_SLACK:
        raise RecordError(f"non-unit axis (norm {norm:.17g})")
    return UnitVector3.normalized(values)


def read_matrix(values, tol) -> RotationMatrix:
    try:
        return RotationMatrix(tuple(values), tol)
    except RotationError as exc:
        raise RecordError(str(exc)) from None


def _records(stream):
    for lineno, line in enumerate(stream, start=1):
        if line.strip():
            yield lineno, line


def _emit(out, obj):
    out.write(json.dumps(obj))
    out.write("\n")


def _error(out, record_id, message):
    _emit(out, {"id": record_id, "error": message})


def cmd_aa2mat(args, inp, out) -> int:
    failures = 0
    for lineno, line in _records(inp):
        try:
            record_id, kind, payload = parse_record(line, lineno)
            if kind != "axis_angle":
                raise RecordError("aa2mat expects 'axis' and 'angle'")
            axis_values, angle = payload
            if args.degrees:
                angle = math.radians(angle)
            r = rotation_from_axis_angle(AxisAngle(read_axis(axis_values), angle))
        except RecordError as err:
            failures += 1
            _error(out, getattr(err, "record_id", lineno), str(err))
            continue
        _emit(out, {"id": record_id, "matrix": list(r.m)})
    return EXIT_RECORD_FAILURE if failures else EXIT_OK


def _clean(values):
    # drop negative zeros
    return [v + 0.0 for v in values]


def _angle_out(angle, degrees):
    return math.degrees(angle) if degrees else angle


def cmd_mat2aa(args, inp, out) -> int:
    tracking = args.track or args.prev_axis is not None
    state = ContinuityState(previous_axis=args.prev_axis)
    failures = 0
    for lineno, line in _records(inp):
        try:
            record_id, kind, payload = parse_record(line, lineno)
            if kind != "matrix":
                raise RecordError("mat2aa expects 'matrix'")
            r = read_matrix(payload, args.tol)
            if tracking:
                sample, state = resolve_with_previous(state, r)
            else:
                report = matrix_to_axis_angle(r)
        except (RecordError, RotationError) as err:
            failures += 1
            _error(out, getattr(err, "record_id", lineno), str(err))
            continue
        if tracking:
            aa = sample.axis_angle
            _emit(out, {
                "id": record_id,
                "axis": _clean(aa.axis),
                "angle": _angle_out(aa.angle, args.degrees),
                "degeneracy": sample.degeneracy.value,
                "flipped": sample.flipped,
                "axis_dot_previous": sample.axis_dot_previous,
                "residual_reconstruction": sample.residual_reconstruction,
            })
        else:
            aa = report.result
            _emit(out, {
                "id": record_id,
                "axis": _clean(aa.axis),
                "angle": _angle_out(aa.angle, args.degrees),
                "degeneracy": report.degeneracy.value,
                "residual_axis": report.residual_axis,
                "residual_reconstruction": report.residual_reconstruction,
                "branch_note": report.branch_note,
            })
    return EXIT_RECORD_FAILURE if failures else EXIT_OK


def rotation_vector_residual(original: AxisAngle, recovered: AxisAngle) -> float:
    """Max componentwise gap between rotation vectors ``t n``, modulo full turns.

    Both sign branches give the same rotation vector, and the comparison stays
    well conditioned for tiny angles where the axis itself is meaningless.
    """
    target = original.canonical()
    tx, ty, tz = (target.angle * c for c in target.axis)
    best = math.inf
    for turns in (-1, 0, 1):
        angle = recovered.angle + 2.0 * math.pi * turns
        rx, ry, rz = (angle * c for c in recovered.axis)
        best = min(best, max(abs(tx - rx), abs(ty - ry), abs(tz - rz)))
    return best


def cmd_roundtrip(args, inp, out) -> int:
    count = failures = 0
    max_residual = 0.0
    for lineno, line in _records(inp):
        count += 1
        try:
            record_id, kind, payload = parse_record(line, lineno)
            if kind == "matrix":
                residual = matrix_to_axis_angle(read_matrix(payload, args.tol)).residual_reconstruction
            else:
                axis_values, angle = payload
                if args.degrees:
                    angle = math.radians(angle)
                aa = AxisAngle(read_axis(axis_values), angle)
                back = matrix_to_axis_angle(rotation_from_axis_angle(aa)).result
                residual = rotation_vector_residual(aa, back)
        except (RecordError, RotationError) as err:
            failures += 1
            _error(out, getattr(err, "record_id", lineno), str(err))
            continue
        max_residual = max(max_residual, residual)
        ok = residual <= RECONSTRUCTION_TOL
        if not ok:
            failures += 1
        _emit(out, {"id": record_id, "residual": residual, "ok": ok})
    _emit(out, {"summary": {"count": count, "max_residual": max_residual, "failures": failures}})
    return EXIT_RECORD_FAILURE if failures else EXIT_OK


def random_axis_angles(n: int, seed: int) -> list[AxisAngle]:
    """Uniform axes on the sphere with angles uniform in (-pi, pi)."""
    rng = np.random.default_rng(seed)
    axes = rng.standard_normal((n, 3))
    axes /= np.linalg.norm(axes, axis=1, keepdims=True)
    angles = rng.uniform(-math.pi, math.pi, n)
    return [AxisAngle(UnitVector3.normalized(a), float(t)) for a, t in zip(axes, angles)]


def extended_angle(r: RotationMatrix) -> AxisAngle:
    axis, _ = extract_axis(r)
    c = cos_theta_from_trace(r)
    s = sin_theta_from_skew_product(skew(axis), r)
    return AxisAngle(axis, math.atan2(s, c))


def naive_angle(r: RotationMatrix) -> AxisAngle:
    """``arccos`` of the trace, then reconstruct both signs and keep the closer one."""
    axis, _ = extract_axis(r)
    theta = math.acos(cos_theta_from_trace(r))
    plus = AxisAngle(axis, theta)
    minus = AxisAngle(axis, -theta)
    if r.max_abs_diff(rotation_from_axis_angle(plus)) <= r.max_abs_diff(rotation_from_axis_angle(minus)):
        return plus
    return minus


def _time_per_op(fn, items):
    start = time.perf_counter_ns()
    results = [fn(x) for x in items]
    return results, (time.perf_counter_ns() - start) / len(items)


def cmd_bench(args, inp, out) -> int:
    samples = random_axis_angles(args.n, args.seed)
    mats, ns_synth = _time_per_op(rotation_from_axis_angle, samples)
    extended, ns_ext = _time_per_op(extended_angle, mats)
    naive, ns_naive = _time_per_op(naive_angle, mats)
    disagree = sum(
        1 for a, b in zip(extended, naive)
        if a.axis != b.axis or abs(wrap_angle(a.angle - b.angle)) > BRANCH_AGREEMENT_TOL
    )
    _emit(out, {
        "n": args.n,
        "seed": args.seed,
        "ns_per_op": {"extended": ns_ext, "naive": ns_naive, "synthesis": ns_synth},
        "agree": args.n - disagree,
        "disagree": disagree,
    })
    return EXIT_RECORD_FAILURE if disagree else EXIT_OK


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _axis_arg(text):
    try:
        values = [float(v) for v in text.split(",")]
        if len(values) != 3:
            raise ValueError
        return UnitVector3.normalized(values)
    except (ValueError, RotationError):
        raise argparse.ArgumentTypeError(f"expected a nonzero X,Y,Z vector, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--in", dest="input", metavar="PATH", help="input JSON-lines file (default stdin)")
    io.add_argument("--out", dest="output", metavar="PATH", help="output file (default stdout)")
    io.add_argument("--degrees", action="store_true", help="angles at the boundary are in degrees")
    io.add_argument("--tol", type=float, default=ORTHOGONALITY_TOL, help="orthogonality tolerance for input matrices")

    parser = argparse.ArgumentParser(prog="rotaxis", description="Rotation matrix <-> axis-angle conversion")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aa2mat", parents=[io], help="axis-angle records to matrices")
    p.set_defaults(func=cmd_aa2mat)

    p = sub.add_parser("mat2aa", parents=[io], help="matrix records to axis-angle")
    p.add_argument("--track", action="store_true", help="treat records as an ordered stream and keep axes continuous")
    p.add_argument("--prev-axis", type=_axis_arg, metavar="X,Y,Z", help="seed axis for continuity (implies --track)")
    p.set_defaults(func=cmd_mat2aa)

    p = sub.add_parser("roundtrip", parents=[io], help="convert each record there and back, report residuals")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("bench", help="time extended vs arccos angle recovery")
    p.add_argument("--n", type=_positive_int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_bench, input=None)
    return parser


def _join_negative_values(argv):
    # "--prev-axis -1,0,0" would otherwise be read as an unknown option
    joined = []
    it = iter(argv)
    for tok in it:
        if tok == "--prev-axis":
            nxt = next(it, None)
            joined.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            joined.append(tok)
    return joined


def main(argv=None, stdin=None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_join_negative_values(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        with contextlib.ExitStack() as stack:
            inp = stack.enter_context(open(args.input)) if args.input else (stdin or sys.stdin)
            out = stack.enter_context(open(args.output, "w")) if args.output else (stdout or sys.stdout)
            return args.func(args, inp, out)
    except OSError as exc:
        print(f"rotaxis: {exc}", file=sys.stderr)
        return EXIT_USAGE
