import json
import math

import numpy as np
import pytest

from stepcast.cli import main, parse_angle
from stepcast.spectral import load_poly


def test_parse_angle():
    assert parse_angle("pi/2") == math.pi / 2
    assert parse_angle("-pi/4") == -math.pi / 4
    assert parse_angle("2pi/3") == 2 * math.pi / 3
    assert parse_angle("pi") == math.pi
    assert parse_angle("0.5") == 0.5
    with pytest.raises(ValueError):
        parse_angle("pint")


def test_approx_sweep(tmp_path):
    out = tmp_path / "a"
    rc = main(
        [
            "approx", "--target", "predict", "--T", "1", "--gap", "pi/2",
            "--dmax", "6", "--grid", "256", "--curve", "--out", str(out),
        ]
    )
    assert rc == 0
    lines = (out / "sweep.csv").read_text().strip().splitlines()
    assert lines[0] == "d,l2Error,supError,conditionNumber"
    assert len(lines) == 8
    l2 = [float(s.split(",")[1]) for s in lines[1:]]
    assert all(b <= a + 1e-12 for a, b in zip(l2, l2[1:]))
    p = load_poly(out / "coeffs_d6.json")
    assert p.degree == 6
    assert (out / "error_curve.csv").exists()


def test_approx_rejects_zero_gap(tmp_path):
    rc = main(["approx", "--gap", "0", "--dmax", "2", "--out", str(tmp_path / "x")])
    assert rc == 2


def test_gen_deterministic_bytes(tmp_path):
    a, b = tmp_path / "g1", tmp_path / "g2"
    for out in (a, b):
        assert main(["gen", "--N", "32", "--gap", "1.0", "--seed", "9", "--out", str(out)]) == 0
    assert (a / "signal.csv").read_bytes() == (b / "signal.csv").read_bytes()
    assert (a / "signal.json").read_bytes() == (b / "signal.json").read_bytes()
    meta = json.loads((a / "signal.json").read_text())
    assert meta["gapResidual"] < 1e-12


def test_gen_left_sided(tmp_path):
    out = tmp_path / "gl"
    rc = main(
        ["gen", "--N", "32", "--gap", "pi/2", "--seed", "2", "--left-sided", "odd", "--out", str(out)]
    )
    assert rc == 0
    rows = (out / "signal.csv").read_text().strip().splitlines()[1:]
    vals = np.array([float(r.split(",")[1]) for r in rows])
    assert abs(vals[0]) < 1e-14
    assert np.abs(vals[(-np.arange(32)) % 32] + vals).max() < 1e-13


def test_predict_default_meets_bound(tmp_path):
    out = tmp_path / "p"
    assert main(["predict", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["maxError"] <= s["bound"]
    rows = (out / "predict.csv").read_text().strip().splitlines()[1:]
    errs = [float(r.split(",")[3]) for r in rows]
    assert max(errs) == s["maxError"]


def test_predict_zero_horizon(tmp_path):
    out = tmp_path / "p0"
    assert main(["predict", "--T", "0", "--d", "4", "--grid", "256", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["maxError"] < 1e-10


def test_predict_deterministic(tmp_path):
    a, b = tmp_path / "d1", tmp_path / "d2"
    args = ["predict", "--N", "48", "--d", "4", "--grid", "256", "--seed", "5"]
    for out in (a, b):
        assert main(args + ["--out", str(out)]) == 0
    assert (a / "predict.csv").read_bytes() == (b / "predict.csv").read_bytes()
    assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()


def test_filter_default_suppresses_band(tmp_path):
    out = tmp_path / "f"
    assert main(["filter", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["inBandMax"] <= s["bound"]
    header = (out / "spectrum.csv").read_text().splitlines()[0]
    assert header == "omega,inputMag,outputMag,idealMag"


def test_filter_identity_passthrough(tmp_path):
    out = tmp_path / "fi"
    assert main(["filter", "--cutoff", "0.6", "--gap", "0.6", "--d", "0", "--out", str(out)]) == 0
    rows = (out / "spectrum.csv").read_text().strip().splitlines()[1:]
    for r in rows:
        _, xin, yout, _ = r.split(",")
        assert abs(float(xin) - float(yout)) < 1e-12


def test_filter_rejects_gap_above_cutoff(tmp_path):
    rc = main(["filter", "--gap", "1.2", "--cutoff", "1.0", "--out", str(tmp_path / "fx")])
    assert rc == 2


def test_expcoeffs_budget(tmp_path, capsys):
    out = tmp_path / "e"
    assert main(["expcoeffs", "--eps", "0.1", "--gap", "pi/2", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["supError"] <= s["budget"]
    assert s["degree"] == 15
    assert "sup error" in capsys.readouterr().out


def test_expcoeffs_power_path(tmp_path):
    out = tmp_path / "e2"
    assert main(["expcoeffs", "--eps", "0.1", "--T", "2", "--out", str(out)]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["T"] == 2
    assert s["supError"] <= s["budget"]


def test_expcoeffs_rejects_nonnegative_nu(tmp_path):
    rc = main(["expcoeffs", "--nu", "1.0", "--d", "5", "--out", str(tmp_path / "ex")])
    assert rc == 2
