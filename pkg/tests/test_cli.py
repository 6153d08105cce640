import json
import math
import re
import subprocess
import sys

import pytest

from pinchflow import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_success_and_failure(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "L3.1", "--n", "7", "--no-timing")
    data = json.loads(out)
    assert code == 0 and data["verified"] is True and "wall_time_ms" not in data
    code, out, _ = run(capsys, "verify", "--lemma", "L3.1", "--n", "7", "--max-cells", "1", "--no-timing")
    assert code == 2 and json.loads(out)["verified"] is False


def test_verify_output_is_deterministic(capsys):
    argv = ("verify", "--lemma", "L2.3.i", "--n", "9", "--no-timing")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_extrema(capsys):
    code, out, _ = run(capsys, "extrema", "--expr", "L3.1.delta", "--n", "7")
    data = json.loads(out)
    assert code == 0 and data["mode"] == "Max"
    assert data["x_star"] == pytest.approx(20.399, abs=0.05) and data["f_star"] == pytest.approx(-0.264, abs=0.005)
    # JSON floats are written with 17 significant digits
    assert f'"x_star": {data["x_star"]:.17g}' in out


def test_thresholds_csv(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "thresholds", "--n", "5", "--profiles", "SqrtA,Alpha", "--xmax", "10",
                     "--steps", "11", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and lines[0] == "x,SqrtA,Alpha" and len(lines) == 12
    a0 = float(lines[1].split(",")[1])
    assert a0 == pytest.approx(math.sqrt(10), rel=1e-15)
    assert all(v == f"{float(v):.17g}" for v in lines[2].split(","))


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--n", "7", "--model", "sphere:rho=0.7853981633974483")
    data = json.loads(out)
    assert code == 0 and data["classification"] == "StrictlyInside"
    assert data["normA2"] == pytest.approx(7)
    code, out, _ = run(capsys, "classify", "--n", "7", "--model", "clifford:psi=0.785398")
    assert json.loads(out)["classification"] == "Outside"


def test_flow_sphere_csv(capsys):
    code, out, _ = run(capsys, "flow", "--kind", "sphere", "--n", "7", "--record-stride", "100")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0].startswith("t,max_A2,")
    m = re.match(r"# outcome=RoundPoint extinction_time=(\S+)", lines[-1])
    assert m and float(m.group(1)) == pytest.approx(math.log(2) / 7, abs=1e-6)
    # 17 significant digits round-trip every value
    for field in lines[3].split(","):
        assert field == f"{float(field):.17g}"


def test_flow_axisym_seeded_noise_is_byte_identical(capsys, tmp_path):
    argv = ["flow", "--kind", "axisym", "--grid-size", "33", "--t-max", "0.002", "--noise", "0.02",
            "--seed", "11", "--record-stride", "20"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    _, c, _ = run(capsys, *argv[:-4], "--seed", "12", "--record-stride", "20")
    assert a == b and a != c


def test_config_overrides_defaults(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"kind": "sphere", "which": "A2", "r1-factor": 2}))
    code, out, _ = run(capsys, "consistency", "--config", str(cfg))
    data = json.loads(out)
    assert code == 2 and data["r1_factor"] == 2 and data["residual"] > 0.1
    # command-line flags win over the file
    code, out, _ = run(capsys, "consistency", "--config", str(cfg), "--r1-factor", "1")
    assert code == 0 and json.loads(out)["residual"] <= 1e-6


@pytest.mark.parametrize("payload", [{"bogus": 1}, {"which": "R3"}, {"dt": "fast"}, [1, 2]])
def test_bad_config_is_usage_error(capsys, tmp_path, payload):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(payload))
    code, _, err = run(capsys, "consistency", "--kind", "sphere", "--which", "H2", "--config", str(cfg))
    assert code == 1 and "usage error" in err


def test_usage_and_runtime_errors(capsys):
    assert run(capsys, "flow")[0] == 1
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys, "classify", "--model", "cube:side=1")[0] == 1
    assert run(capsys, "flow", "--kind", "sphere", "--rho0", "4")[0] == 1
    assert run(capsys, "extrema", "--expr", "L3.1.delta", "--n", "3")[0] == 1
    assert run(capsys, "verify", "--lemma", "NOPE")[0] == 1
    assert run(capsys, "--threads", "0", "classify", "--model", "equator")[0] == 1


def test_consistency_exit_codes(capsys):
    assert run(capsys, "consistency", "--kind", "sphere", "--which", "H2")[0] == 0
    assert run(capsys, "consistency", "--kind", "clifford", "--which", "A2", "--r1-factor", "2")[0] == 2
    code, out, _ = run(capsys, "consistency", "--kind", "equator", "--which", "A2")
    assert code == 0 and json.loads(out)["residual"] == 0


def test_to_json_non_finite():
    text = cli.to_json({"a": float("nan"), "b": [math.inf, 0.1], "c": None, "d": True})
    assert "NaN" in text and "Infinity" in text and "0.10000000000000001" in text
    assert json.loads(text)["c"] is None


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "pinchflow", "classify", "--model", "equator", "--n", "4"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["classification"] == "StrictlyInside"


def test_numpy_fallback_subprocess():
    env = {"PINCHFLOW_DISABLE_NUMBA": "1", "PATH": "/usr/bin:/bin"}
    code = ("from pinchflow import _accel; from pinchflow.flow import kernels; "
            "print(_accel.HAVE_NUMBA, kernels.heun_step is kernels.heun_step_numpy)")
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert res.stdout.split() == ["False", "True"]
