import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from conftest import EXAMPLE_MATRIX, random_axis_angles
from rotaxis import AxisAngle, RotationMatrix, UnitVector3, rotation_from_axis_angle
from rotaxis.cli import main, rotation_vector_residual

A = 1 / math.sqrt(2)
EXAMPLE_RECORD = {"axis": [0.7071067811865476, 0.7071067811865476, 0], "angle": 0.5235987755982988}


def run(argv, lines=()):
    text = "".join(line if isinstance(line, str) else json.dumps(line) + "\n" for line in lines)
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(text), stdout=out)
    return code, [json.loads(line) for line in out.getvalue().splitlines()]


def matrix_record(R, **extra):
    return {"matrix": np.asarray(R, dtype=float).reshape(9).tolist(), **extra}


class TestAa2Mat:
    def test_examples(self):
        code, out = run(["aa2mat"], [EXAMPLE_RECORD, {"axis": [0, 0, 1], "angle": 0}, {"axis": [0, 0, 2], "angle": 1}])
        assert code == 1
        assert [r["id"] for r in out] == [1, 2, 3]
        assert np.max(np.abs(np.reshape(out[0]["matrix"], (3, 3)) - EXAMPLE_MATRIX)) <= 1e-15
        assert out[1]["matrix"] == [1, 0, 0, 0, 1, 0, 0, 0, 1]
        assert "non-unit axis" in out[2]["error"]

    def test_success_exit_code(self):
        code, _ = run(["aa2mat"], [EXAMPLE_RECORD])
        assert code == 0

    def test_degrees(self):
        _, [rad] = run(["aa2mat"], [EXAMPLE_RECORD])
        _, [deg] = run(["aa2mat", "--degrees"], [{"axis": EXAMPLE_RECORD["axis"], "angle": 30}])
        assert np.max(np.abs(np.subtract(rad["matrix"], deg["matrix"]))) <= 1e-15

    def test_nearly_unit_axis_is_normalized(self):
        code, [rec] = run(["aa2mat"], [{"axis": [0, 0, 1 + 5e-7], "angle": math.pi / 2}])
        assert code == 0
        assert np.max(np.abs(np.subtract(rec["matrix"], [0, -1, 0, 1, 0, 0, 0, 0, 1]))) <= 1e-15

    @pytest.mark.parametrize("line, message", [
        ("{not json\n", "malformed JSON"),
        ('{"axis": [0, 0, 1], "angle": NaN}\n', "non-finite"),
        ('{"axis": [0, 0, 1]}\n', "needs both"),
        ('{"axis": [0, 0, 1], "angle": true}\n', "must be a number"),
        ('{"axis": [0, 1], "angle": 1}\n', "3 numbers"),
        ('[1, 2, 3]\n', "JSON object"),
        ('{"matrix": [1, 0, 0, 0, 1, 0, 0, 0, 1], "axis": [0, 0, 1], "angle": 0}\n', "exactly one"),
        ('{"matrix": [1, 0, 0, 0, 1, 0, 0, 0, 1]}\n', "expects"),
    ])
    def test_record_errors(self, line, message):
        code, [rec] = run(["aa2mat"], [line])
        assert code == 1
        assert message in rec["error"]
        assert rec["id"] == 1

    def test_ids_are_echoed_and_order_kept(self, rng):
        recs = [{"axis": list(aa.axis), "angle": aa.angle, "id": f"r{k}"} for k, aa in enumerate(random_axis_angles(rng, 50))]
        _, out = run(["aa2mat"], recs)
        assert [r["id"] for r in out] == [f"r{k}" for k in range(50)]

    def test_emitted_matrices_validate_and_round_trip_exactly(self, rng):
        aas = random_axis_angles(rng, 200)
        _, out = run(["aa2mat"], [{"axis": list(aa.axis), "angle": aa.angle} for aa in aas])
        for aa, rec in zip(aas, out):
            RotationMatrix.of(rec["matrix"])
            same = AxisAngle(UnitVector3.normalized(aa.axis), aa.angle)
            assert tuple(rec["matrix"]) == rotation_from_axis_angle(same).m

    def test_blank_lines_are_skipped(self):
        code, out = run(["aa2mat"], ["\n", EXAMPLE_RECORD])
        assert code == 0
        assert out[0]["id"] == 2


class TestMat2Aa:
    def test_example(self):
        code, [rec] = run(["mat2aa"], [matrix_record(EXAMPLE_MATRIX)])
        assert code == 0
        assert rec["axis"] == pytest.approx([A, A, 0], abs=1e-15)
        assert rec["angle"] == pytest.approx(math.pi / 6, abs=1e-15)
        assert rec["degeneracy"] == "Generic"
        assert rec["residual_reconstruction"] <= 1e-12

    def test_identity(self):
        _, [rec] = run(["mat2aa"], [matrix_record(np.eye(3))])
        assert rec["axis"] == [0, 0, 1]
        assert rec["angle"] == 0
        assert rec["degeneracy"] == "NearZeroAngle"

    def test_nested_matrix(self):
        _, [rec] = run(["mat2aa"], [{"matrix": EXAMPLE_MATRIX.tolist()}])
        assert rec["angle"] == pytest.approx(math.pi / 6)

    @pytest.mark.parametrize("argv", [
        ["mat2aa", "--prev-axis", "-0.707,-0.707,0"],
        ["mat2aa", "--prev-axis=-0.707,-0.707,0"],
        ["mat2aa", "--track", "--prev-axis", "-0.707,-0.707,0"],
    ])
    def test_prev_axis(self, argv):
        code, [rec] = run(argv, [matrix_record(EXAMPLE_MATRIX)])
        assert code == 0
        assert rec["axis"] == pytest.approx([-A, -A, 0], abs=1e-15)
        assert rec["angle"] == pytest.approx(-math.pi / 6, abs=1e-15)
        assert rec["flipped"] is True

    def test_bad_prev_axis_is_usage_error(self):
        code, _ = run(["mat2aa", "--prev-axis", "0,0,0"], [])
        assert code == 2

    def test_track_keeps_axis_continuous(self):
        axis = UnitVector3.normalized([0.2, -0.5, 0.8])
        mats = [rotation_from_axis_angle(AxisAngle(axis, t)).m for t in np.arange(2.9, 3.5, 0.02)]
        _, plain = run(["mat2aa"], [{"matrix": list(m)} for m in mats])
        _, tracked = run(["mat2aa", "--track"], [{"matrix": list(m)} for m in mats])
        assert min(np.dot(r["axis"], axis.as_array()) for r in plain) < 0
        assert min(np.dot(r["axis"], axis.as_array()) for r in tracked) > 0.999
        assert tracked[0]["axis_dot_previous"] is None

    def test_invalid_record_does_not_abort_stream(self):
        lines = [matrix_record(EXAMPLE_MATRIX), matrix_record(np.diag([1.0, 1.0, -1.0])), matrix_record(EXAMPLE_MATRIX)]
        code, out = run(["mat2aa", "--track"], lines)
        assert code == 1
        assert "error" in out[1]
        assert out[2]["axis_dot_previous"] == pytest.approx(1.0)

    def test_tol_override(self):
        m = np.diag([1.0 + 1e-7, 1.0, 1.0])
        code, _ = run(["mat2aa"], [matrix_record(m)])
        assert code == 1
        code, _ = run(["mat2aa", "--tol", "1e-6"], [matrix_record(m)])
        assert code == 0

    def test_degrees_output(self):
        _, [rec] = run(["mat2aa", "--degrees"], [matrix_record(EXAMPLE_MATRIX)])
        assert rec["angle"] == pytest.approx(30.0, abs=1e-12)


class TestRoundtrip:
    def test_empty(self):
        code, out = run(["roundtrip"], [])
        assert code == 0
        assert out == [{"summary": {"count": 0, "max_residual": 0.0, "failures": 0}}]

    def test_example_records(self):
        code, out = run(["roundtrip"], [matrix_record(EXAMPLE_MATRIX), EXAMPLE_RECORD])
        assert code == 0
        assert all(r["residual"] <= 1e-12 for r in out[:2])
        assert out[-1]["summary"]["count"] == 2

    @pytest.mark.parametrize("angle", [0.0, 1e-13, 1e-8, 2.0, math.pi, -math.pi, 4.0, -7.5])
    def test_axis_angle_records(self, angle):
        code, out = run(["roundtrip"], [{"axis": [0.6, 0.0, -0.8], "angle": angle}])
        assert code == 0, out
        assert out[0]["residual"] <= 1e-9

    def test_failure_sets_exit_code(self):
        code, out = run(["roundtrip"], [EXAMPLE_RECORD, {"axis": [1, 1, 1], "angle": 1}])
        assert code == 1
        assert out[-1]["summary"]["failures"] == 1

    def test_rotation_vector_residual_ignores_branch(self):
        n = UnitVector3.normalized([1, 2, 2])
        assert rotation_vector_residual(AxisAngle(n, 1.0), AxisAngle(-n, -1.0)) == 0.0
        assert rotation_vector_residual(AxisAngle(n, math.pi), AxisAngle(-n, math.pi)) <= 1e-15
        assert rotation_vector_residual(AxisAngle(n, 1.0), AxisAngle(n, -1.0)) > 1.0


class TestBench:
    def test_zero_is_usage_error(self, capsys):
        code, _ = run(["bench", "--n", "0"])
        assert code == 2

    def test_single_sample(self):
        code, [rep] = run(["bench", "--n", "1"])
        assert code == 0
        assert rep["n"] == 1 and rep["agree"] == 1
        assert set(rep["ns_per_op"]) == {"extended", "naive", "synthesis"}

    def test_deterministic_agreement(self):
        _, [a] = run(["bench", "--n", "300", "--seed", "5"])
        _, [b] = run(["bench", "--n", "300", "--seed", "5"])
        assert a["agree"] == b["agree"] == 300


class TestFilesAndProcess:
    def test_in_out_files(self, tmp_path):
        src = tmp_path / "in.jsonl"
        dst = tmp_path / "out.jsonl"
        src.write_text(json.dumps(EXAMPLE_RECORD) + "\n")
        assert main(["aa2mat", "--in", str(src), "--out", str(dst)]) == 0
        assert len(dst.read_text().splitlines()) == 1

    def test_missing_input_is_io_error(self, tmp_path):
        assert main(["aa2mat", "--in", str(tmp_path / "nope.jsonl")]) == 2

    def test_unknown_subcommand(self):
        assert main(["frobnicate"]) == 2

    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "rotaxis", "mat2aa"],
            input=json.dumps(matrix_record(EXAMPLE_MATRIX)) + "\n",
            capture_output=True, text=True, check=False,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["angle"] == pytest.approx(math.pi / 6)
