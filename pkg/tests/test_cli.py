import csv
import io
import json
import math
import shutil
import subprocess
import sys

import numpy as np
import pytest

from mfteleport import cli
from mfteleport.metrics import eof_two_qubit
from mfteleport.qudit_core import PhysicalityError, werner


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array(rows[1:], dtype=float)


class TestDvSweep:
    def test_header_and_rows(self, capsys):
        code, out, _ = run(["dv-sweep", "--steps", "11"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "param,f_stage1,f_stage2,f_stage3,eof"
        _, data = parse_csv(out)
        p = data[:, 0]
        np.testing.assert_allclose(data[:, 1], 1, atol=1e-9)
        np.testing.assert_allclose(data[:, 2], 0.5, atol=1e-9)
        np.testing.assert_allclose(data[:, 3], (1 + p) / 2, atol=1e-8)
        want_eof = [eof_two_qubit(werner(2, x)) for x in p]
        np.testing.assert_allclose(data[:, 4], want_eof, atol=1e-8)

    def test_endpoint_rows_are_exact_strings(self, capsys):
        _, out, _ = run(["dv-sweep", "--steps", "3"], capsys)
        lines = out.splitlines()
        assert lines[1].split(",")[3] == "0.5"
        assert lines[-1].split(",")[3] == "1"

    def test_nine_significant_digits(self, capsys):
        _, out, _ = run(["dv-sweep", "--steps", "4"], capsys)
        # p = 1/3 prints as 0.333333333
        assert out.splitlines()[2].startswith("0.333333333,")

    def test_deterministic_random_input(self, capsys, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            target = tmp_path / name
            assert cli.main(["dv-sweep", "--steps", "7", "--input", "random", "--seed", "5", "--out", str(target)]) == 0
            outs.append(target.read_bytes())
        assert outs[0] == outs[1]

    def test_parallel_matches_serial(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        cli.main(["dv-sweep", "--steps", "21", "--out", str(a)])
        cli.main(["dv-sweep", "--steps", "21", "--jobs", "4", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_qutrit_eof_blank(self, capsys):
        _, out, _ = run(["dv-sweep", "--d", "3", "--steps", "2"], capsys)
        _, data = parse_csv(out)
        assert np.all(np.isnan(data[:, 4]))
        np.testing.assert_allclose(data[-1, 3], 1, atol=1e-9)

    def test_custom_matrix_file(self, capsys, tmp_path):
        f = tmp_path / "rho.txt"
        f.write_text("# |1><1|\n0,0 0,0\n0,0 1,0\n")
        code, out, _ = run(["dv-sweep", "--steps", "2", "--input", str(f)], capsys)
        assert code == 0
        _, data = parse_csv(out)
        np.testing.assert_allclose(data[:, 3], [0.5, 1.0], atol=1e-9)

    def test_maximally_mixed_always_one(self, capsys):
        _, out, _ = run(["dv-sweep", "--steps", "5", "--input", "maximally_mixed"], capsys)
        _, data = parse_csv(out)
        np.testing.assert_allclose(data[:, 1:4], 1, atol=1e-9)

    def test_svg(self, tmp_path, capsys):
        svg = tmp_path / "fig.svg"
        code, _, _ = run(["dv-sweep", "--steps", "5", "--svg", str(svg)], capsys)
        assert code == 0
        text = svg.read_text()
        assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
        assert text.count("<polyline") == 4


class TestCvSweep:
    def test_r0_row(self, capsys):
        _, out, _ = run(["cv-sweep", "--steps", "3"], capsys)
        first = out.splitlines()[1].split(",")
        assert first[0] == "0"
        assert first[3] == "0.6"
        assert first[4] == "0"

    def test_r2_row(self, capsys):
        _, out, _ = run(["cv-sweep", "--steps", "3"], capsys)
        _, data = parse_csv(out)
        assert data[-1, 0] == 2
        assert data[-1, 3] == pytest.approx(1 / (1 + (2 / 3) * math.exp(-4)), abs=1e-9)

    def test_svg(self, tmp_path, capsys):
        svg = tmp_path / "cv.svg"
        assert run(["cv-sweep", "--steps", "5", "--svg", str(svg)], capsys)[0] == 0
        assert "<polyline" in svg.read_text()


class TestOtherCommands:
    def test_stages_dv_qutrit(self, capsys):
        code, out, _ = run(["stages", "--mode", "dv", "--d", "3"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "stage,fidelity,trace_distance"
        stage, fid, _ = lines[4].split(",")
        assert stage == "3"
        assert float(fid) == pytest.approx(1.0, abs=1e-9)

    def test_stages_cv(self, capsys):
        code, out, _ = run(["stages", "--mode", "cv", "--g2", "3"], capsys)
        assert code == 0
        assert out.splitlines()[4] == "3,0.6"

    def test_divisibility(self, capsys):
        code, out, _ = run(["divisibility", "--d", "2", "--p", "1", "--json"], capsys)
        assert code == 0
        info = json.loads(out)
        assert info["verdict"] == "non_divisible"
        assert info["residual"] > 0.1

    def test_divisibility_text(self, capsys):
        _, out, _ = run(["divisibility"], capsys)
        assert "verdict: non_divisible" in out

    def test_blp(self, capsys):
        code, out, _ = run(["blp", "--d", "2", "--p", "1"], capsys)
        assert code == 0
        seq = [float(x) for x in out.splitlines()[0].split(",")]
        np.testing.assert_allclose(seq, [1, 1, 0, 1], atol=1e-9)
        assert "non_markovian" in out

    def test_blp_computational_pair(self, capsys):
        _, out, _ = run(["blp", "--pair", "computational"], capsys)
        seq = [float(x) for x in out.splitlines()[0].split(",")]
        np.testing.assert_allclose(seq, [1, 1, 1, 1], atol=1e-9)


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["dv-sweep", "--p", "3"],
            ["dv-sweep", "--d", "11"],
            ["dv-sweep", "--steps", "1"],
            ["blp", "--p", "1.5"],
            ["nonsense"],
        ],
    )
    def test_bad_flags(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 2

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(["dv-sweep", "--input", str(tmp_path / "none.txt")], capsys)
        assert code == 2
        assert "error" in err

    def test_unphysical_file(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("1.5,0 0,0\n0,0 -0.5,0\n")
        assert run(["dv-sweep", "--input", str(f)], capsys)[0] == 2

    def test_wrong_dimension_file(self, capsys, tmp_path):
        f = tmp_path / "q.txt"
        f.write_text("1,0 0,0\n0,0 0,0\n")
        assert run(["dv-sweep", "--d", "3", "--input", str(f)], capsys)[0] == 2

    def test_invalid_physics_parameter(self, capsys):
        assert run(["cv-sweep", "--g2", "0.5"], capsys)[0] == 2

    def test_overflow_is_numerical_failure(self, capsys):
        code, _, err = run(["cv-sweep", "--r-max", "400", "--steps", "3"], capsys)
        assert code == 3
        assert "numerical failure" in err

    def test_physicality_error_maps_to_3(self, capsys, monkeypatch):
        def broken(*args, **kwargs):
            raise PhysicalityError("intermediate state is not positive")

        monkeypatch.setattr(cli.dv_teleport, "run_ideal", broken)
        assert run(["stages", "--mode", "dv"], capsys)[0] == 3


@pytest.mark.skipif(shutil.which("mfteleport") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["mfteleport", "blp"], capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.startswith("1,1,")


def test_module_entry():
    res = subprocess.run([sys.executable, "-m", "mfteleport.cli", "divisibility", "--json"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["verdict"] == "non_divisible"
