import math

import numpy as np
import pytest

from rotaxis import AxisAngle, UnitVector3, rotation_from_axis_angle

# Worked example: axis (1/sqrt2, 1/sqrt2, 0), angle pi/6.
S2 = math.sqrt(2.0)
S3 = math.sqrt(3.0)
EXAMPLE_AXIS = (1.0 / S2, 1.0 / S2, 0.0)
EXAMPLE_ANGLE = math.pi / 6
# Closed form of I + sin(t) N + (1 - cos(t)) N N for the example, by hand.
EXAMPLE_MATRIX = np.array([
    [(2 + S3) / 4, (2 - S3) / 4, S2 / 4],
    [(2 - S3) / 4, (2 + S3) / 4, -S2 / 4],
    [-S2 / 4, S2 / 4, S3 / 2],
])


def random_unit_axes(rng, n):
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_axis_angles(rng, n, low=-math.pi, high=math.pi):
    axes = random_unit_axes(rng, n)
    angles = rng.uniform(low, high, n)
    return [AxisAngle(UnitVector3.normalized(a), float(t)) for a, t in zip(axes, angles)]


def precession_stream(steps=720, step_deg=0.5, tilt=math.pi / 4, angle=0.3):
    """Axis tilted from z by ``tilt``, precessing ``step_deg`` per step; fixed angle."""
    axes = []
    for k in range(steps):
        phi = math.radians(step_deg * k)
        axes.append(UnitVector3.normalized([
            math.sin(tilt) * math.cos(phi), math.sin(tilt) * math.sin(phi), math.cos(tilt)]))
    return axes, [rotation_from_axis_angle(AxisAngle(n, angle)) for n in axes]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def example_axis():
    return UnitVector3.normalized(EXAMPLE_AXIS)


_ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record and print a PASS/FAIL line for an acceptance criterion, then assert it."""

    def check(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return check


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
